#include "dgac/experiments.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "dgac/characteristic.hpp"
#include "dgac/checkpoint.hpp"
#include "dgac/companion.hpp"

namespace dgac {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected a boolean");
  } else {
    if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  }
  return v.get<T>();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

double log2_ratio(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(coarse / fine);
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  reject_unknown(j, {"dimension", "mesh", "time", "space", "epsilon", "problem", "solver", "quadrature", "output"}, "config");
  RunConfig c;
  c.dimension = get_field<int>(j, "dimension", "config", 1);
  if (c.dimension != 1 && c.dimension != 2) throw ConfigError("config.dimension: must be 1 or 2");

  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    reject_unknown(m, {"n", "n_per_side"}, "mesh");
    if (c.dimension == 1 && m.contains("n_per_side")) throw ConfigError("mesh.n_per_side: only valid in 2D, use mesh.n");
    if (c.dimension == 2 && m.contains("n")) throw ConfigError("mesh.n: only valid in 1D, use mesh.n_per_side");
    c.mesh_n = c.dimension == 1 ? get_field<int>(m, "n", "mesh", c.mesh_n) : get_field<int>(m, "n_per_side", "mesh", c.mesh_n);
  }
  if (c.mesh_n < 1) throw ConfigError("mesh: cell count must be positive");

  if (j.contains("time")) {
    const json& t = j.at("time");
    reject_unknown(t, {"T", "N_slabs", "k"}, "time");
    c.final_time = get_field<double>(t, "T", "time", c.final_time);
    c.slabs = get_field<int>(t, "N_slabs", "time", c.slabs);
    c.k = get_field<int>(t, "k", "time", c.k);
  }
  if (!(c.final_time > 0.0)) throw ConfigError("time.T: must be positive");
  if (c.slabs < 1) throw ConfigError("time.N_slabs: must be positive");
  if (c.k < 0 || c.k > 8) throw ConfigError("time.k: must lie in 0..8");

  if (j.contains("space")) {
    reject_unknown(j.at("space"), {"degree_l"}, "space");
    c.l = get_field<int>(j.at("space"), "degree_l", "space", c.l);
  }
  if (c.l != 1 && c.l != 2) throw ConfigError("space.degree_l: must be 1 or 2");

  c.epsilon = get_field<double>(j, "epsilon", "config", c.epsilon);
  if (!(c.epsilon > 0.0)) throw ConfigError("config.epsilon: must be positive");

  if (!j.contains("problem")) throw ConfigError("config.problem: missing");
  {
    const json& p = j.at("problem");
    reject_unknown(p, {"manufactured", "initial_profile"}, "problem");
    c.manufactured = get_field<std::string>(p, "manufactured", "problem", "");
    c.initial_profile = get_field<std::string>(p, "initial_profile", "problem", "");
    if (c.manufactured.empty() == c.initial_profile.empty())
      throw ConfigError("problem: set exactly one of 'manufactured' and 'initial_profile'");
    if (!c.manufactured.empty()) {
      if (!is_manufactured_id(c.manufactured)) throw ConfigError("problem.manufactured: unknown id '" + c.manufactured + "'");
      if (manufactured_by_id(c.manufactured).dimension != c.dimension)
        throw ConfigError("problem.manufactured: '" + c.manufactured + "' does not match the dimension");
    } else if (!is_initial_profile_id(c.initial_profile)) {
      throw ConfigError("problem.initial_profile: unknown id '" + c.initial_profile + "'");
    }
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, {"newton_abs_tol", "newton_rel_tol", "max_iter", "linear_method", "linear_tol"}, "solver");
    c.solver.abs_tol = get_field<double>(s, "newton_abs_tol", "solver", c.solver.abs_tol);
    c.solver.rel_tol = get_field<double>(s, "newton_rel_tol", "solver", c.solver.rel_tol);
    c.solver.max_iter = get_field<int>(s, "max_iter", "solver", c.solver.max_iter);
    if (s.contains("linear_method")) {
      try {
        c.solver.linear.method = parse_linear_method(get_field<std::string>(s, "linear_method", "solver", ""));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("solver.linear_method: ") + e.what());
      }
    }
    c.solver.linear.rel_tolerance = get_field<double>(s, "linear_tol", "solver", c.solver.linear.rel_tolerance);
  }
  if (!(c.solver.abs_tol > 0.0) || !(c.solver.rel_tol > 0.0) || !(c.solver.linear.rel_tolerance > 0.0))
    throw ConfigError("solver: tolerances must be positive");
  if (c.solver.max_iter < 1) throw ConfigError("solver.max_iter: must be positive");

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    reject_unknown(q, {"time_points", "space_order", "under_integrate"}, "quadrature");
    c.time_points = get_field<int>(q, "time_points", "quadrature", 0);
    c.space_order = get_field<int>(q, "space_order", "quadrature", 0);
    c.under_integrate = get_field<bool>(q, "under_integrate", "quadrature", false);
  }
  if (c.time_points < 0 || c.space_order < 0) throw ConfigError("quadrature: orders must be non-negative");
  if (!c.under_integrate && c.time_points > 0 && c.time_points < default_time_quadrature_points(c.k))
    throw ConfigError("quadrature.time_points: below the exact rule for degree 4k+2; set under_integrate to allow it");

  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, {"directory", "run_id"}, "output");
    c.output_directory = get_field<std::string>(o, "directory", "output", c.output_directory);
    c.run_id = get_field<std::string>(o, "run_id", "output", c.run_id);
  }
  if (c.run_id.empty()) throw ConfigError("output.run_id: must not be empty");
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["dimension"] = c.dimension;
  j["mesh"] = c.dimension == 1 ? json{{"n", c.mesh_n}} : json{{"n_per_side", c.mesh_n}};
  j["time"] = {{"T", c.final_time}, {"N_slabs", c.slabs}, {"k", c.k}};
  j["space"] = {{"degree_l", c.l}};
  j["epsilon"] = c.epsilon;
  j["problem"] = c.manufactured.empty() ? json{{"initial_profile", c.initial_profile}} : json{{"manufactured", c.manufactured}};
  j["solver"] = {{"newton_abs_tol", c.solver.abs_tol},
                 {"newton_rel_tol", c.solver.rel_tol},
                 {"max_iter", c.solver.max_iter},
                 {"linear_method", to_string(c.solver.linear.method)},
                 {"linear_tol", c.solver.linear.rel_tolerance}};
  j["quadrature"] = {{"time_points", c.time_points}, {"space_order", c.space_order}, {"under_integrate", c.under_integrate}};
  j["output"] = {{"directory", c.output_directory}, {"run_id", c.run_id}};
  return j;
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  j.erase("output");  // where results go does not change them
  const std::string s = j.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunConfig default_verify_config() {
  RunConfig c;
  c.dimension = 1;
  c.mesh_n = 16;
  c.slabs = 8;
  c.k = 1;
  c.l = 1;
  c.epsilon = 0.5;
  c.initial_profile = "interface";
  c.run_id = "verify";
  return c;
}

RunSetup build_run(const RunConfig& c) {
  RunSetup s;
  s.mesh = std::make_shared<const Mesh>(c.dimension == 1 ? build_interval_mesh(0.0, 1.0, c.mesh_n) : build_square_mesh(c.mesh_n));
  auto space = build_space(s.mesh, c.l);
  auto ops = std::make_shared<const SpatialOperators>(space, c.space_order);
  int q = c.time_points;
  if (q == 0 && c.under_integrate) q = std::max(1, c.k);
  auto basis = make_time_basis(c.k, q, c.under_integrate);
  s.disc = make_discretization(ops, TimePartition::uniform(c.final_time, c.slabs), basis);
  s.problem = c.manufactured.empty()
                  ? make_unforced_problem(initial_profile_by_id(c.initial_profile, c.epsilon), c.epsilon, c.final_time)
                  : make_manufactured_problem(manufactured_by_id(c.manufactured), c.epsilon, c.final_time);
  return s;
}

std::string norm_csv_header() { return "run_id,k,l,N,n_cells,epsilon,L2L2,LinfL2,L2H1,L4L4,jump_sum,config_hash\n"; }

std::string norm_csv_row(const RunConfig& c, const NormReport& r) {
  std::ostringstream os;
  os << c.run_id << ',' << c.k << ',' << c.l << ',' << c.slabs << ',' << c.cells() << ',' << fmt(c.epsilon) << ','
     << fmt(r.L2L2) << ',' << fmt(r.LinfL2) << ',' << fmt(r.L2H1) << ',' << fmt(r.L4L4) << ',' << fmt(r.jump_sum) << ','
     << config_hash(c) << '\n';
  return os.str();
}

json error_json(const std::string& kind, const std::string& message) {
  return json{{"error", kind}, {"message", message}};
}

namespace {

json newton_error_json(const NewtonError& e) {
  json j = error_json("solver_failure", e.what());
  j["slab"] = e.report().slab;
  json hist = json::array();
  for (const auto& s : e.report().history)
    hist.push_back({{"iteration", s.iteration}, {"residual", s.residual}, {"step_norm", s.step_norm}, {"halvings", s.halvings}});
  j["history"] = std::move(hist);
  return j;
}

CheckpointManifest manifest_for(const RunConfig& c, const RunSetup& s) {
  CheckpointManifest m;
  m.config_hash = config_hash(c);
  m.k = c.k;
  m.l = c.l;
  m.slabs = c.slabs;
  m.cells = s.mesh->cell_count();
  m.free_dofs = s.disc->free_dofs();
  m.epsilon = c.epsilon;
  m.final_time = c.final_time;
  return m;
}

}  // namespace

SolveOutcome cmd_solve(const RunConfig& c, const fs::path& out) {
  SolveOutcome o;
  const fs::path dir = out / c.run_id;
  const RunSetup s = build_run(c);
  try {
    const DgSolution u = solve_forward(s.problem, s.disc, c.solver);
    write_checkpoint(dir / "checkpoint", u, manifest_for(c, s));
    o.norms = compute_norms(u);
    std::string csv = norm_csv_header() + norm_csv_row(c, *o.norms);
    if (s.problem.exact) {
      o.error_norms = compute_norms(u, &*s.problem.exact);
      write_text(dir / "error_norms.csv", norm_csv_header() + norm_csv_row(c, *o.error_norms));
    }
    write_text(dir / "norms.csv", csv);
    write_text(dir / "config.json", to_json(c).dump(2) + "\n");
  } catch (const NewtonError& e) {
    o.exit_code = exit_solver_failure;
    o.error = e.what();
    write_text(dir / "error.json", newton_error_json(e).dump(2) + "\n");
  } catch (const LinearSolveError& e) {
    o.exit_code = exit_solver_failure;
    o.error = e.what();
    write_text(dir / "error.json", error_json("solver_failure", e.what()).dump(2) + "\n");
  }
  return o;
}

RefineMode parse_refine_mode(const std::string& s) {
  if (s == "time") return RefineMode::time;
  if (s == "space") return RefineMode::space;
  if (s == "both") return RefineMode::both;
  throw ConfigError("refine: expected time, space or both, got '" + s + "'");
}

namespace {

RunConfig level_config(const RunConfig& base, int level, RefineMode refine) {
  RunConfig c = base;
  const int f = 1 << level;
  if (refine != RefineMode::space) c.slabs = base.slabs * f;
  if (refine != RefineMode::time) c.mesh_n = base.mesh_n * f;
  c.run_id = base.run_id + "_L" + std::to_string(level);
  return c;
}

void add_orders(ConvergenceTable& t) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    ConvergenceRow& r = t.rows[i];
    r.x_norm = r.errors.LinfL2 + r.errors.L2H1;
    if (i == 0) {
      r.order_L2L2 = r.order_LinfL2 = r.order_L2H1 = r.order_X = nan;
      continue;
    }
    const ConvergenceRow& p = t.rows[i - 1];
    r.order_L2L2 = log2_ratio(p.errors.L2L2, r.errors.L2L2);
    r.order_LinfL2 = log2_ratio(p.errors.LinfL2, r.errors.LinfL2);
    r.order_L2H1 = log2_ratio(p.errors.L2H1, r.errors.L2H1);
    r.order_X = log2_ratio(p.x_norm, r.x_norm);
  }
}

std::string convergence_csv(const RunConfig& base, const ConvergenceTable& t) {
  std::ostringstream os;
  os << "level,n,N,h,tau,L2L2,LinfL2,L2H1,L4L4,X,order_L2L2,order_LinfL2,order_L2H1,order_X,config_hash\n";
  for (const auto& r : t.rows) {
    os << r.level << ',' << r.n << ',' << r.slabs << ',' << fmt(r.h) << ',' << fmt(r.tau) << ',' << fmt(r.errors.L2L2)
       << ',' << fmt(r.errors.LinfL2) << ',' << fmt(r.errors.L2H1) << ',' << fmt(r.errors.L4L4) << ',' << fmt(r.x_norm)
       << ',' << fmt(r.order_L2L2) << ',' << fmt(r.order_LinfL2) << ',' << fmt(r.order_L2H1) << ',' << fmt(r.order_X)
       << ',' << config_hash(base) << '\n';
  }
  return os.str();
}

template <typename SolveFn>
ConvergenceTable run_ladder(const RunConfig& base, int levels, RefineMode refine, SolveFn&& solve_level) {
  if (levels < 3) throw ConfigError("levels: need at least 3 refinement levels");
  if (base.manufactured.empty()) throw ConfigError("convergence: needs a manufactured problem");
  ConvergenceTable t;
  for (int lev = 0; lev < levels; ++lev) {
    const RunConfig c = level_config(base, lev, refine);
    ConvergenceRow row;
    row.level = lev;
    row.n = c.mesh_n;
    row.slabs = c.slabs;
    row.h = 1.0 / c.mesh_n;
    row.tau = c.final_time / c.slabs;
    try {
      row.errors = solve_level(c);
    } catch (const NewtonError& e) {
      t.complete = false;
      t.error = e.what();
      break;
    } catch (const LinearSolveError& e) {
      t.complete = false;
      t.error = e.what();
      break;
    }
    t.rows.push_back(std::move(row));
  }
  add_orders(t);
  return t;
}

}  // namespace

ConvergenceTable cmd_convergence(const RunConfig& base, int levels, RefineMode refine, const fs::path& out) {
  ConvergenceTable t = run_ladder(base, levels, refine, [](const RunConfig& c) {
    const RunSetup s = build_run(c);
    const DgSolution u = solve_forward(s.problem, s.disc, c.solver);
    return compute_norms(u, &*s.problem.exact);
  });
  write_text(out / (base.run_id + "_convergence.csv"), convergence_csv(base, t));
  if (!t.complete) write_text(out / (base.run_id + "_convergence_error.json"), error_json("solver_failure", t.error).dump(2) + "\n");
  return t;
}

ConvergenceTable projection_convergence(const RunConfig& base, int levels, RefineMode refine, ProjectionKind kind) {
  return run_ladder(base, levels, refine, [kind](const RunConfig& c) {
    const RunSetup s = build_run(c);
    const ManufacturedSolution& u = *s.problem.exact;
    const DgSolution p = kind == ProjectionKind::parabolic ? solve_parabolic_projection(u, s.disc, c.solver.linear)
                                                           : local_projection_all(u.value, s.disc);
    return compute_norms(p, &u);
  });
}

SweepResult cmd_stability_sweep(const RunConfig& base, const std::vector<double>& epsilons, const fs::path& out) {
  if (epsilons.empty()) throw ConfigError("epsilons: need at least one value");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw ConfigError("epsilons: values must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ConfigError("epsilons: values must be strictly descending");
  }
  SweepResult res;
  std::ostringstream csv;
  csv << "epsilon,status,L2L2,LinfL2,L2H1,L4L4,jump_sum,scaled_L2L2,scaled_eps_X,scaled_eps_L4sq,config_hash\n";
  for (double eps : epsilons) {
    RunConfig c = base;
    c.epsilon = eps;
    SweepRow row;
    row.epsilon = eps;
    try {
      const RunSetup s = build_run(c);
      const DgSolution u = solve_forward(s.problem, s.disc, c.solver);
      row.norms = compute_norms(u);
      row.ok = true;
      row.scaled_L2L2 = row.norms.L2L2;
      row.scaled_X = eps * (row.norms.LinfL2 + row.norms.L2H1);
      row.scaled_L4 = eps * row.norms.L4L4 * row.norms.L4L4;
    } catch (const NewtonError& e) {
      row.error = e.what();
    } catch (const LinearSolveError& e) {
      row.error = e.what();
    }
    if (!row.ok) res.exit_code = exit_solver_failure;
    csv << fmt(eps) << ',' << (row.ok ? "ok" : "failed") << ',';
    if (row.ok) {
      csv << fmt(row.norms.L2L2) << ',' << fmt(row.norms.LinfL2) << ',' << fmt(row.norms.L2H1) << ','
          << fmt(row.norms.L4L4) << ',' << fmt(row.norms.jump_sum) << ',' << fmt(row.scaled_L2L2) << ','
          << fmt(row.scaled_X) << ',' << fmt(row.scaled_L4);
    } else {
      csv << ",,,,,,,";
    }
    csv << ',' << config_hash(c) << '\n';
    res.rows.push_back(std::move(row));
  }
  write_text(out / (base.run_id + "_sweep.csv"), csv.str());
  return res;
}

VerifyResult cmd_verify(const RunConfig& c, const fs::path& out) {
  VerifyResult res;
  const RunSetup s = build_run(c);
  const std::string hash = config_hash(c);
  json report = json::array();
  auto record = [&](IdentityCheck chk) {
    report.push_back({{"identity", chk.identity},
                      {"LHS", chk.lhs},
                      {"RHS", chk.rhs},
                      {"residual", chk.residual},
                      {"threshold", chk.threshold},
                      {"status", chk.skipped ? "skipped" : (chk.passed() ? "pass" : "fail")},
                      {"note", chk.note},
                      {"config_hash", hash}});
    res.checks.push_back(std::move(chk));
  };

  std::optional<DgSolution> u;
  try {
    u = solve_forward(s.problem, s.disc, c.solver);
  } catch (const NewtonError& e) {
    res.exit_code = exit_solver_failure;
    res.error = e.what();
    write_text(out / (c.run_id + "_identities.json"), newton_error_json(e).dump(2) + "\n");
    return res;
  }

  const BackwardDualSolution dual = solve_backward_dual(*u, s.problem, c.solver.linear);
  {
    const IdentityReport r = duality_identity(dual, s.problem);
    record({"duality", r.lhs, r.rhs, r.residual, 1e-8, false, ""});
  }
  {
    const DualStabilityReport r = dual_stability(dual, s.problem);
    record({"dual_stability", r.lhs, r.bound, std::max(0.0, -r.slack) / (1.0 + r.bound), 1e-10, false,
            "residual is the relative excess of the left side over the bound"});
  }
  {
    IdentityCheck chk{"stability_balance", 0.0, 0.0, 0.0, 1e-9, false, "worst slab, relative"};
    for (const auto& sl : stability_identity(*u, s.problem)) {
      if (sl.relative_residual >= chk.residual) {
        chk.residual = sl.relative_residual;
        chk.lhs = sl.lhs;
        chk.rhs = sl.rhs;
      }
    }
    record(chk);
  }
  if (c.k == 0) {
    record({"energy", 0.0, 0.0, 0.0, 1e-10, true, "skipped (k=0)"});
  } else if (!s.problem.forcing->is_zero()) {
    record({"energy", 0.0, 0.0, 0.0, 1e-10, true, "skipped (f != 0)"});
  } else {
    IdentityCheck chk{"energy", 0.0, 0.0, 0.0, 1e-10, false, "worst slab, residual / (1 + tau E)"};
    for (const auto& e : energy_trace(*u, s.problem)) {
      const double scaled = e.residual / e.tolerance_scale;
      if (scaled >= chk.residual) {
        chk.residual = scaled;
        chk.lhs = s.disc->partition.tau(e.slab) * e.right_energy + e.weighted_dissipation;
        chk.rhs = e.integrated_energy;
      }
    }
    record(chk);
  }
  {
    ScalarField w;
    if (s.problem.exact) {
      w = s.problem.exact->value;
    } else {
      const auto u0 = s.problem.initial_data;
      w = [u0](double t, const Point& x) { return std::exp(-t) * u0(x); };
    }
    IdentityCheck chk{"local_projection_moments", 0.0, 0.0, 0.0, 1e-12, false, "worst slab defect"};
    for (int n = 1; n <= c.slabs; ++n)
      chk.residual = std::max(chk.residual, local_projection_defect(w, n, *s.disc, local_projection(w, n, *s.disc)));
    record(chk);
  }
  {
    std::mt19937 rng(20240607u);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    IdentityCheck chk{"characteristic_moments", 0.0, 0.0, 0.0, 1e-12, false, "100 random cut points, both constructions"};
    for (int i = 0; i < 100; ++i) {
      const double t_hat = dist(rng);
      chk.residual = std::max(chk.residual, moment_defect(discrete_characteristic(c.k, t_hat, CharacteristicMethod::weighted_basis)));
      chk.residual = std::max(chk.residual, moment_defect(discrete_characteristic(c.k, t_hat, CharacteristicMethod::moment_system)));
    }
    record(chk);
  }

  for (const auto& chk : res.checks)
    if (!chk.passed()) {
      res.exit_code = exit_identity_failure;
      if (!res.error.empty()) res.error += "; ";
      res.error += "identity '" + chk.identity + "' failed (residual " + fmt(chk.residual) + " > " + fmt(chk.threshold) + ")";
    }
  write_text(out / (c.run_id + "_identities.json"), report.dump(2) + "\n");
  return res;
}

SpectrumOutcome cmd_spectrum(const RunConfig& c, const fs::path& out) {
  SpectrumOutcome o;
  const RunSetup s = build_run(c);
  try {
    const DgSolution u = solve_forward(s.problem, s.disc, c.solver);
    o.trace = spectrum_along_solution(u, s.disc->partition.endpoints(), c.epsilon);
  } catch (const NewtonError& e) {
    o.exit_code = exit_solver_failure;
    o.error = e.what();
    write_text(out / (c.run_id + "_spectrum.json"), newton_error_json(e).dump(2) + "\n");
    return o;
  }
  json j{{"times", o.trace.times},
         {"lambda_min", o.trace.lambda_min},
         {"eigen_residuals", o.trace.residuals},
         {"C_s", o.trace.C_s},
         {"epsilon", c.epsilon},
         {"note", "Rayleigh quotient over the Dirichlet-constrained discrete space"},
         {"config_hash", config_hash(c)}};
  write_text(out / (c.run_id + "_spectrum.json"), j.dump(2) + "\n");
  return o;
}

}  // namespace dgac
