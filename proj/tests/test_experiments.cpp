#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dgac/checkpoint.hpp"
#include "dgac/experiments.hpp"

using namespace dgac;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json::parse(R"({
    "dimension": 1,
    "mesh": {"n": 8},
    "time": {"T": 0.2, "N_slabs": 4, "k": 1},
    "space": {"degree_l": 1},
    "epsilon": 0.5,
    "problem": {"manufactured": "expsine"},
    "solver": {"newton_abs_tol": 1e-14, "newton_rel_tol": 1e-12, "max_iter": 30, "linear_method": "banded_lu", "linear_tol": 1e-13},
    "quadrature": {"time_points": 0, "space_order": 0, "under_integrate": false},
    "output": {"directory": "out", "run_id": "t"}
  })");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dgac_exp_" + name);
  fs::remove_all(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing round trip") {
  const RunConfig c = parse_run_config(base_config());
  CHECK(c.mesh_n == 8);
  CHECK(c.k == 1);
  CHECK(c.manufactured == "expsine");
  CHECK(c.initial_profile.empty());
  CHECK(c.solver.linear.method == LinearMethod::banded_lu);
  const RunConfig again = parse_run_config(to_json(c));
  CHECK(config_hash(again) == config_hash(c));
}

TEST_CASE("config errors") {
  auto expect_error = [](json j) { CHECK_THROWS_AS(parse_run_config(j), ConfigError); };
  json j = base_config();
  j["mesh"]["cells"] = 4;
  expect_error(j);
  j = base_config();
  j["problem"]["manufactured"] = "nosuch";
  expect_error(j);
  j = base_config();
  j["problem"]["initial_profile"] = "interface";
  expect_error(j);  // both problem kinds
  j = base_config();
  j["problem"].erase("manufactured");
  expect_error(j);  // neither
  j = base_config();
  j["epsilon"] = "small";
  expect_error(j);
  j = base_config();
  j["epsilon"] = -1.0;
  expect_error(j);
  j = base_config();
  j["time"]["k"] = -1;
  expect_error(j);
  j = base_config();
  j["space"]["degree_l"] = 3;
  expect_error(j);
  j = base_config();
  j["dimension"] = 2;  // expsine is one-dimensional
  expect_error(j);
  j = base_config();
  j["solver"]["linear_method"] = "gmres";
  expect_error(j);
  j = base_config();
  j["extra"] = true;
  expect_error(j);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config hash ignores the output section and tracks everything else") {
  const RunConfig a = parse_run_config(base_config());
  json j = base_config();
  j["output"]["run_id"] = "other";
  j["output"]["directory"] = "elsewhere";
  CHECK(config_hash(parse_run_config(j)) == config_hash(a));
  j = base_config();
  j["epsilon"] = 0.25;
  CHECK(config_hash(parse_run_config(j)) != config_hash(a));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("solve writes checkpoint, tables and config") {
  const fs::path out = scratch("solve");
  const RunConfig c = parse_run_config(base_config());
  const SolveOutcome o = cmd_solve(c, out);
  REQUIRE(o.exit_code == exit_success);
  REQUIRE(o.error_norms);
  CHECK(o.error_norms->LinfL2 < 1e-2);
  const fs::path run = out / "t";
  CHECK(fs::exists(run / "config.json"));
  CHECK(fs::exists(run / "checkpoint" / "manifest.json"));
  const std::string csv = read_file(run / "norms.csv");
  CHECK(csv.rfind(norm_csv_header(), 0) == 0);
  CHECK(csv.find(config_hash(c)) != std::string::npos);
  CHECK(read_manifest(run / "checkpoint").config_hash == config_hash(c));
  CHECK(fs::exists(run / "error_norms.csv"));
  fs::remove_all(out);
}

TEST_CASE("solver failures produce exit code 2 and an error document") {
  const fs::path out = scratch("fail");
  json j = base_config();
  j["problem"] = {{"initial_profile", "interface"}};
  j["epsilon"] = 0.01;
  j["mesh"]["n"] = 64;
  j["time"]["N_slabs"] = 1;
  j["time"]["T"] = 1.0;
  j["solver"]["max_iter"] = 2;
  const SolveOutcome o = cmd_solve(parse_run_config(j), out);
  CHECK(o.exit_code == exit_solver_failure);
  CHECK_FALSE(o.error.empty());
  const json e = json::parse(read_file(out / "t" / "error.json"));
  CHECK(e["error"] == "solver_failure");
  fs::remove_all(out);
}

TEST_CASE("verify passes on the default configuration and fails under-integrated") {
  const fs::path out = scratch("verify");
  const VerifyResult ok = cmd_verify(default_verify_config(), out);
  CHECK(ok.exit_code == exit_success);
  for (const auto& c : ok.checks) {
    CAPTURE(c.identity);
    CHECK(c.passed());
  }
  CHECK(fs::exists(out / "verify_identities.json"));

  RunConfig bad = default_verify_config();
  bad.under_integrate = true;
  const VerifyResult r = cmd_verify(bad, out);
  CHECK(r.exit_code == exit_identity_failure);
  bool duality_failed = false;
  for (const auto& c : r.checks)
    if (c.identity == "duality") duality_failed = !c.passed();
  CHECK(duality_failed);
  fs::remove_all(out);
}

TEST_CASE("convergence ladders") {
  const fs::path out = scratch("conv");
  const RunConfig c = parse_run_config(base_config());
  CHECK_THROWS_AS(cmd_convergence(c, 2, RefineMode::both, out), ConfigError);
  RunConfig unforced = c;
  unforced.manufactured.clear();
  unforced.initial_profile = "interface";
  CHECK_THROWS_AS(cmd_convergence(unforced, 3, RefineMode::both, out), ConfigError);
  const ConvergenceTable t = cmd_convergence(c, 3, RefineMode::both, out);
  REQUIRE(t.complete);
  REQUIRE(t.rows.size() == 3);
  CHECK(std::isnan(t.rows[0].order_X));
  CHECK(t.rows[2].n == 4 * t.rows[0].n);
  CHECK(t.rows[2].slabs == 4 * t.rows[0].slabs);
  CHECK(t.rows[2].order_L2H1 > 0.8);
  CHECK(fs::exists(out / "t_convergence.csv"));
  CHECK(parse_refine_mode("time") == RefineMode::time);
  CHECK_THROWS(parse_refine_mode("never"));
  fs::remove_all(out);
}

TEST_CASE("stability sweep validates its epsilon list") {
  const fs::path out = scratch("sweep");
  RunConfig c = parse_run_config(base_config());
  CHECK_THROWS_AS(cmd_stability_sweep(c, {0.1, 0.2}, out), ConfigError);
  CHECK_THROWS_AS(cmd_stability_sweep(c, {0.2, -0.1}, out), ConfigError);
  c.manufactured.clear();
  c.initial_profile = "interface";
  const SweepResult r = cmd_stability_sweep(c, {0.4, 0.2}, out);
  CHECK(r.exit_code == exit_success);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[1].scaled_X == doctest::Approx(0.2 * (r.rows[1].norms.LinfL2 + r.rows[1].norms.L2H1)));
  CHECK(fs::exists(out / "t_sweep.csv"));
  fs::remove_all(out);
}

TEST_CASE("shipped configs parse") {
  const fs::path dir = fs::path(DGAC_SOURCE_DIR) / "configs";
  int parsed = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("invalid", 0) == 0) {
      CHECK_THROWS_AS(load_run_config(e.path()), ConfigError);
    } else {
      CAPTURE(name);
      CHECK_NOTHROW(load_run_config(e.path()));
      ++parsed;
    }
  }
  CHECK(parsed >= 5);
}

TEST_CASE("error documents") {
  const json e = error_json("config_error", "bad");
  CHECK(e["error"] == "config_error");
  CHECK(e["message"] == "bad");
}

TEST_CASE("identical configs give byte-identical tables") {
  const RunConfig c = parse_run_config(base_config());
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  cmd_solve(c, a);
  cmd_solve(c, b);
  CHECK(read_file(a / "t" / "norms.csv") == read_file(b / "t" / "norms.csv"));
  CHECK(read_file(a / "t" / "error_norms.csv") == read_file(b / "t" / "error_norms.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("a one-row sweep matches the solve norms") {
  RunConfig c = parse_run_config(base_config());
  c.manufactured.clear();
  c.initial_profile = "interface";
  const fs::path out = scratch("single");
  const SweepResult r = cmd_stability_sweep(c, {c.epsilon}, out);
  const SolveOutcome o = cmd_solve(c, out);
  REQUIRE(r.rows.size() == 1);
  REQUIRE(o.norms);
  CHECK(r.rows[0].norms.L2L2 == o.norms->L2L2);
  CHECK(r.rows[0].norms.L2H1 == o.norms->L2H1);
  fs::remove_all(out);
}

TEST_CASE("verify with k = 0 skips the energy identity") {
  RunConfig c = default_verify_config();
  c.k = 0;
  const fs::path out = scratch("k0");
  const VerifyResult r = cmd_verify(c, out);
  CHECK(r.exit_code == exit_success);
  bool skipped = false;
  for (const auto& chk : r.checks)
    if (chk.identity == "energy") skipped = chk.skipped && chk.note == "skipped (k=0)";
  CHECK(skipped);
  fs::remove_all(out);
}
