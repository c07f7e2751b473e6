// Acceptance run: one PASS/FAIL line per criterion.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "dense_oracle.hpp"
#include "dgac/characteristic.hpp"
#include "dgac/experiments.hpp"

using namespace dgac;
using oracle::DenseOracle;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

fs::path scratch_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "dgac_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

RunConfig manufactured_config(int k, int l, int n, int slabs, double T) {
  RunConfig c;
  c.dimension = 1;
  c.mesh_n = n;
  c.slabs = slabs;
  c.final_time = T;
  c.k = k;
  c.l = l;
  c.epsilon = 0.5;
  c.manufactured = "expsine";
  c.run_id = "acc";
  return c;
}

RunConfig interface_config(double eps, int n, int slabs, double T) {
  RunConfig c;
  c.mesh_n = n;
  c.slabs = slabs;
  c.final_time = T;
  c.k = 1;
  c.l = 1;
  c.epsilon = eps;
  c.initial_profile = "interface";
  c.run_id = "acc";
  return c;
}

double duality_residual(const RunConfig& cfg) {
  const RunSetup s = build_run(cfg);
  const DgSolution u = solve_forward(s.problem, s.disc, cfg.solver);
  return duality_identity(solve_backward_dual(u, s.problem), s.problem).residual;
}

bool in_band(double v, double target, double tol) { return std::abs(v - target) <= tol; }

// ---- 1. exactness and oracle suite ----

Outcome check_duality() {
  RunConfig cfg = default_verify_config();
  const double base = duality_residual(cfg);
  cfg.solver.abs_tol = 1e-8;
  cfg.solver.rel_tol = 1e-8;
  const double loose = duality_residual(cfg);
  cfg.solver.abs_tol = 1e-12;
  cfg.solver.rel_tol = 1e-12;
  const double tight = duality_residual(cfg);
  RunConfig bad = default_verify_config();
  bad.under_integrate = true;
  const double control = duality_residual(bad);
  return {base <= 1e-8 && tight < loose && control > 1e-8,
          "residual " + fmt(base) + ", tol 1e-8 -> " + fmt(loose) + ", tol 1e-12 -> " + fmt(tight) +
              ", under-integrated control " + fmt(control)};
}

Outcome check_energy() {
  double worst = 0.0;
  for (int k : {1, 2}) {
    RunConfig cfg = default_verify_config();
    cfg.k = k;
    const RunSetup s = build_run(cfg);
    const DgSolution u = solve_forward(s.problem, s.disc, cfg.solver);
    for (const EnergySlab& e : energy_trace(u, s.problem)) worst = std::max(worst, e.residual / e.tolerance_scale);
  }
  return {worst <= 1e-10, "max scaled residual " + fmt(worst) + " over k = 1, 2"};
}

double oracle_gap(int k, int cells, int slabs, double eps, double T) {
  auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, cells));
  auto ops = std::make_shared<const SpatialOperators>(build_space(mesh, 1));
  const auto disc = make_discretization(ops, TimePartition::uniform(T, slabs), make_time_basis(k));
  const auto u0 = [](const Point& x) { return 4.0 * x[0] * (1.0 - x[0]); };
  const DgSolution sol = solve_forward(make_unforced_problem(u0, eps, T), disc, NewtonConfig{});
  const DenseOracle o(cells, eps, disc->basis->nodes());
  const auto ref = o.solve(o.project([](double x) { return 4.0 * x * (1.0 - x); }), T, slabs);
  double gap = 0.0;
  for (int n = 1; n <= slabs; ++n)
    for (int j = 0; j < o.nt(); ++j)
      for (int v = 1; v < cells; ++v)
        gap = std::max(gap, std::abs(sol.slab(n).coefficients[j][ops->space().free_index(v)] - ref[n - 1][j * o.m + v - 1]));
  return gap;
}

Outcome check_slab_oracle() {
  const double g1 = oracle_gap(1, 8, 3, 0.3, 0.2);    // 7 dofs, dG(1)
  const double g0 = oracle_gap(0, 12, 3, 0.3, 0.2);   // 11 dofs, implicit Euler
  return {g1 <= 1e-10 && g0 <= 1e-10, "dG(1) vs dense Newton " + fmt(g1) + ", dG(0) vs implicit Euler " + fmt(g0)};
}

Outcome check_characteristic() {
  std::mt19937 rng(20240607);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double defect = 0.0, agree = 0.0;
  for (int k = 0; k <= 4; ++k)
    for (int i = 0; i < 100; ++i) {
      const double t = u(rng);
      const auto a = discrete_characteristic(k, t, CharacteristicMethod::weighted_basis);
      const auto b = discrete_characteristic(k, t, CharacteristicMethod::moment_system);
      defect = std::max({defect, moment_defect(a), moment_defect(b)});
      for (int s = 0; s <= 100; ++s) agree = std::max(agree, std::abs(a(s / 100.0) - b(s / 100.0)));
    }
  const double c0 = sup_norm_scan(0, 1001).constant;
  const double c1 = sup_norm_scan(1, 1001).constant;
  const bool ok = defect <= 1e-12 && agree <= 1e-10 && std::abs(c0 - 1.0) <= 1e-14 && std::abs(c1 - 1.0) <= 1e-14;
  std::ostringstream os;
  os << "moment defect " << fmt(defect) << ", path agreement " << fmt(agree) << ", C_0 = " << std::setprecision(17) << c0
     << ", C_1 = " << c1;
  return {ok, os.str()};
}

Eigen::MatrixXd dense(const SparseMatrix& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) m(i, a.col_idx()[p]) = a.values()[p];
  return m;
}

Outcome check_eigen_diagnostic() {
  const double eps = 0.1;
  const int n = 512;
  auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, n));
  const SpatialOperators ops(build_space(mesh, 1));
  const auto prof = interface_profile(eps);
  const SpectrumTrace tr = spectrum_along_solution([&](double, const Point& x) { return prof(x); }, ops, {0.0}, eps);

  Vector w = ops.quadrature().sample(prof);
  for (double& x : w) x = (3.0 * x * x - 1.0) / (eps * eps);
  const Eigen::MatrixXd a = dense(ops.stiffness()) + dense(ops.weighted_mass(w));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, dense(ops.mass()), Eigen::EigenvaluesOnly);
  const double ref = ges.eigenvalues()[0];
  const double rel = std::abs(tr.lambda_min[0] - ref) / std::abs(ref);

  const double pi2 = M_PI * M_PI;
  const double zero = spectrum_along_solution([](double, const Point&) { return 0.0; }, ops, {0.0}, eps).lambda_min[0];
  const double one = spectrum_along_solution([](double, const Point&) { return 1.0; }, ops, {0.0}, eps).lambda_min[0];
  const double z_exact = pi2 - 1.0 / (eps * eps), o_exact = pi2 + 2.0 / (eps * eps);
  const double ez = std::abs(zero - z_exact) / std::abs(z_exact), eo = std::abs(one - o_exact) / std::abs(o_exact);
  return {rel <= 1e-6 && ez <= 0.01 && eo <= 0.01,
          "tanh vs dense " + fmt(rel) + " rel, u = 0 off by " + fmt(ez) + ", u = 1 off by " + fmt(eo)};
}

// ---- 2. rate suite ----

Outcome ladder(const RunConfig& cfg, RefineMode mode, const std::string& norm, double target, double tol) {
  const ConvergenceTable t = cmd_convergence(cfg, 4, mode, scratch_root());
  if (!t.complete) return {false, "ladder incomplete: " + t.error};
  const ConvergenceRow& r = t.rows.back();
  const double order = norm == "X" ? r.order_X : norm == "LinfL2" ? r.order_LinfL2 : r.order_L2H1;
  std::ostringstream os;
  os << norm << " orders";
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto& q = t.rows[i];
    os << ' ' << fmt(norm == "X" ? q.order_X : norm == "LinfL2" ? q.order_LinfL2 : q.order_L2H1);
  }
  os << " (target " << target << " +- " << tol << ")";
  return {in_band(order, target, tol), os.str()};
}

Outcome check_projections() {
  const RunConfig cfg = manufactured_config(1, 1, 8, 8, 1.0);
  bool ok = true;
  std::ostringstream os;
  for (auto kind : {ProjectionKind::parabolic, ProjectionKind::local}) {
    const ConvergenceTable t = projection_convergence(cfg, 4, RefineMode::both, kind);
    if (!t.complete) return {false, "projection ladder incomplete: " + t.error};
    const auto& r = t.rows.back();
    ok = ok && in_band(r.order_L2L2, 2.0, 0.2) && in_band(r.order_L2H1, 1.0, 0.2);
    os << (kind == ProjectionKind::parabolic ? "parabolic" : ", local") << " L2L2 " << fmt(r.order_L2L2) << " L2H1 "
       << fmt(r.order_L2H1);
  }
  os << " (targets 2 and 1 +- 0.2)";
  return {ok, os.str()};
}

// ---- 3. scaling suite ----

Outcome check_epsilon_sweep() {
  const SweepResult r = cmd_stability_sweep(interface_config(0.4, 256, 128, 0.02), {0.4, 0.2, 0.1, 0.05}, scratch_root());
  if (r.exit_code != exit_success) return {false, "sweep had failed rows"};
  auto spread = [&](auto get) {
    double lo = 1e300, hi = 0.0;
    for (const auto& row : r.rows) {
      lo = std::min(lo, get(row));
      hi = std::max(hi, get(row));
    }
    return hi / lo;
  };
  const double a = spread([](const SweepRow& s) { return s.scaled_L2L2; });
  const double b = spread([](const SweepRow& s) { return s.scaled_X; });
  return {a <= 4.0 && b <= 4.0, "max/min of ||u||_L2L2 " + fmt(a) + ", of eps(LinfL2 + L2H1) " + fmt(b)};
}

Outcome check_spectrum() {
  bool ok = true;
  std::ostringstream os;
  for (double eps : {0.1, 0.05}) {
    const SpectrumOutcome o = cmd_spectrum(interface_config(eps, 256, 8, 0.01), scratch_root());
    if (o.exit_code != exit_success) return {false, o.error};
    double lo = 1e300, scaled = 0.0;
    for (double l : o.trace.lambda_min) {
      lo = std::min(lo, l);
      scaled = std::max(scaled, std::abs(l) * eps * eps);
    }
    ok = ok && lo >= -10.0 && scaled <= 0.5;
    os << (eps == 0.1 ? "" : "; ") << "eps " << eps << ": min lambda " << fmt(lo) << ", max |lambda| eps^2 " << fmt(scaled);
  }
  return {ok, os.str()};
}

Outcome check_best_approximation() {
  std::vector<double> ratios;
  for (int level = 0; level < 4; ++level) {
    const int n = 8 << level;
    const RunSetup s = build_run(manufactured_config(1, 1, n, n, 1.0));
    const DgSolution uh = solve_forward(s.problem, s.disc, NewtonConfig{});
    const DgSolution up = solve_parabolic_projection(*s.problem.exact, s.disc);
    ratios.push_back(best_approximation_ratio(uh, up, *s.problem.exact).ratio);
  }
  const double hi = std::max({ratios[1], ratios[2], ratios[3]});
  const double lo = std::min({ratios[1], ratios[2], ratios[3]});
  std::ostringstream os;
  os << "ratios";
  for (double r : ratios) os << ' ' << fmt(r);
  os << ", spread over last three " << fmt(hi / lo);
  return {hi / lo <= 2.0, os.str()};
}

// ---- 4. robustness ----

Outcome check_robustness(const std::string& cli) {
  RunConfig z = interface_config(0.1, 64, 4, 0.1);
  z.initial_profile = "zero";
  const fs::path out = scratch_root() / "zero";
  const SolveOutcome o = cmd_solve(z, out);
  const RunSetup s = build_run(z);
  const DgSolution u = solve_forward(s.problem, s.disc, z.solver);
  bool zero = o.exit_code == exit_success && o.norms;
  for (int n = 1; zero && n <= u.slab_count(); ++n)
    for (const Vector& c : u.slab(n).coefficients)
      for (double v : c) zero = zero && v == 0.0;
  zero = zero && o.norms->L2L2 == 0.0 && o.norms->LinfL2 == 0.0 && o.norms->L2H1 == 0.0 && o.norms->L4L4 == 0.0;

  bool rejected = true;
  for (const char* text : {R"({"dimension": 1})", R"({"dimension": 1, "mesh": {"n": 8}, "bogus": 1})"}) {
    try {
      parse_run_config(nlohmann::json::parse(text));
      rejected = false;
    } catch (const ConfigError&) {
    }
  }
  std::string detail = std::string("zero run ") + (zero ? "exactly zero" : "NOT zero") + ", invalid configs " +
                       (rejected ? "rejected" : "accepted");
  bool cli_ok = true;
  if (!cli.empty()) {
    nlohmann::json bad = to_json(default_verify_config());
    bad["problem"] = {{"initial_profile", "nosuch"}};
    const fs::path cfg = scratch_root() / "invalid.json";
    std::ofstream(cfg) << bad.dump();
    const fs::path err = scratch_root() / "stderr.txt";
    const std::string cmd = "\"" + cli + "\" solve --config \"" + cfg.string() + "\" --out \"" +
                            (scratch_root() / "cli").string() + "\" > /dev/null 2> \"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err);
    std::string line;
    std::getline(in, line);
    bool structured = false;
    try {
      structured = nlohmann::json::parse(line).at("error") == "config_error";
    } catch (const std::exception&) {
    }
    cli_ok = code == exit_config_error && structured;
    detail += ", CLI exit " + std::to_string(code) + (structured ? " with JSON error" : " without JSON error");
  }
  return {zero && rejected && cli_ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    std::string name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1.1 duality identity", 10, check_duality},
      {"1.2 energy identity", 10, check_energy},
      {"1.3 slab solver vs dense oracles", 0, check_slab_oracle},
      {"1.4 discrete characteristic", 0, check_characteristic},
      {"1.5 eigen diagnostic", 0, check_eigen_diagnostic},
      {"2.1 k=0 l=1 joint rate", 60,
       [] { return ladder(manufactured_config(0, 1, 16, 16, 1.0), RefineMode::both, "X", 1.0, 0.15); }},
      {"2.2 k=1 l=1 temporal rate", 120,
       [] { return ladder(manufactured_config(1, 1, 512, 8, 1.0), RefineMode::time, "LinfL2", 2.0, 0.2); }},
      {"2.3 k=0 l=2 spatial rate", 120,
       [] { return ladder(manufactured_config(0, 2, 2, 256, 0.1), RefineMode::space, "L2H1", 2.0, 0.2); }},
      {"2.4 projection rates", 0, check_projections},
      {"3.1 epsilon sweep", 300, check_epsilon_sweep},
      {"3.2 spectrum trace", 60, check_spectrum},
      {"3.3 best approximation ratio", 0, check_best_approximation},
      {"4.1 robustness", 0, [&] { return check_robustness(cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.ok = false;
      o.detail += " (over the " + fmt(c.limit_s) + " s budget)";
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << std::left << std::setw(34) << c.name << std::right << o.detail
              << "  [" << std::fixed << std::setprecision(2) << secs << " s]" << std::defaultfloat << std::endl;
  }
  fs::remove_all(scratch_root());
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
