#include "dgac/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dgac {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const CheckpointManifest& m) {
  return json{{"format", "dgac-checkpoint-1"},
              {"config_hash", m.config_hash},
              {"k", m.k},
              {"l", m.l},
              {"N", m.slabs},
              {"n_cells", m.cells},
              {"free_dofs", m.free_dofs},
              {"epsilon", m.epsilon},
              {"T", m.final_time}};
}

void write_checkpoint(const fs::path& directory, const DgSolution& sol, const CheckpointManifest& manifest) {
  fs::create_directories(directory);
  const Discretization& d = sol.discretization();
  json coeffs;
  coeffs["endpoints"] = d.partition.endpoints();
  coeffs["initial"] = sol.initial();
  json slabs = json::array();
  for (int n = 1; n <= sol.slab_count(); ++n) slabs.push_back(json{{"n", n}, {"U", sol.slab(n).coefficients}});
  coeffs["slabs"] = std::move(slabs);

  std::ofstream mf(directory / "manifest.json");
  std::ofstream cf(directory / "coefficients.json");
  if (!mf || !cf) throw std::runtime_error("write_checkpoint: cannot write into " + directory.string());
  mf << to_json(manifest).dump(2) << '\n';
  cf << coeffs.dump() << '\n';
}

namespace {

json load(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + p.string());
  return json::parse(in);
}

}  // namespace

CheckpointManifest read_manifest(const fs::path& directory) {
  const json j = load(directory / "manifest.json");
  if (j.value("format", "") != "dgac-checkpoint-1") throw std::runtime_error("checkpoint: unknown manifest format");
  CheckpointManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.k = j.at("k").get<int>();
  m.l = j.at("l").get<int>();
  m.slabs = j.at("N").get<int>();
  m.cells = j.at("n_cells").get<int>();
  m.free_dofs = j.at("free_dofs").get<int>();
  m.epsilon = j.at("epsilon").get<double>();
  m.final_time = j.at("T").get<double>();
  return m;
}

DgSolution read_checkpoint(const fs::path& directory, std::shared_ptr<const Discretization> disc) {
  const CheckpointManifest m = read_manifest(directory);
  if (m.k != disc->basis->degree() || m.slabs != disc->partition.slab_count() || m.free_dofs != disc->free_dofs() ||
      m.l != disc->space->space().degree())
    throw std::runtime_error("checkpoint: manifest does not match the discretization");
  const json c = load(directory / "coefficients.json");
  const auto ends = c.at("endpoints").get<std::vector<double>>();
  const auto& ref = disc->partition.endpoints();
  if (ends.size() != ref.size()) throw std::runtime_error("checkpoint: time partition mismatch");
  for (std::size_t i = 0; i < ends.size(); ++i)
    if (std::abs(ends[i] - ref[i]) > 1e-14 * (1.0 + std::abs(ref[i]))) throw std::runtime_error("checkpoint: time partition mismatch");

  DgSolution sol(disc, c.at("initial").get<Vector>(), TimeDirection::forward);
  Vector prev = sol.initial();
  for (const auto& s : c.at("slabs")) {
    auto U = s.at("U").get<std::vector<Vector>>();
    for (const auto& u : U)
      if (static_cast<int>(u.size()) != disc->free_dofs()) throw std::runtime_error("checkpoint: coefficient size mismatch");
    SlabSolution slab = make_slab_solution(*disc->basis, s.at("n").get<int>(), std::move(U), prev, TimeDirection::forward);
    prev = slab.right_trace;
    sol.set_slab(std::move(slab));
  }
  return sol;
}

}  // namespace dgac
