// Command line driver for the space-time Allen-Cahn solver.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dgac/characteristic.hpp"
#include "dgac/experiments.hpp"

namespace fs = std::filesystem;
using namespace dgac;

namespace {

int fail(int code, const std::string& kind, const std::string& message) {
  std::cerr << error_json(kind, message).dump() << '\n';
  return code;
}

fs::path output_dir(const RunConfig& cfg, const std::string& out_flag) {
  return out_flag.empty() ? fs::path(cfg.output_directory) : fs::path(out_flag);
}

void print_norms(const char* label, const NormReport& r) {
  std::cout << std::setprecision(6) << label << ": L2L2 " << r.L2L2 << "  LinfL2 " << r.LinfL2 << "  L2H1 " << r.L2H1
            << "  L4L4 " << r.L4L4 << "  jump_sum " << r.jump_sum << '\n';
}

void print_order(double v) {
  if (std::isnan(v))
    std::cout << std::setw(8) << "-";
  else
    std::cout << std::setw(8) << std::fixed << std::setprecision(3) << v << std::defaultfloat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dG(k) in time, Lagrange P_l in space, Allen-Cahn solver and verification suite"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  int levels = 4;
  std::string refine = "both";
  std::vector<double> epsilons;
  int max_k = 4;
  int grid = 2001;

  auto* solve = app.add_subcommand("solve", "forward solve with checkpoint and norm table");
  solve->add_option("--config", config_path, "run configuration (JSON)")->required();
  solve->add_option("--out", out, "output directory (overrides output.directory)");

  auto* conv = app.add_subcommand("convergence", "refinement ladder on a manufactured solution");
  conv->add_option("--config", config_path, "run configuration for level 0")->required();
  conv->add_option("--out", out, "output directory");
  conv->add_option("--levels", levels, "number of levels (>= 3)");
  conv->add_option("--refine", refine, "time, space or both")->check(CLI::IsMember({"time", "space", "both"}));

  auto* sweep = app.add_subcommand("stability-sweep", "norms across a descending list of epsilon");
  sweep->add_option("--config", config_path, "run configuration")->required();
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--epsilons", epsilons, "epsilon values, descending")->required()->delimiter(',');

  auto* verify = app.add_subcommand("verify", "discrete identity checks");
  verify->add_option("--config", config_path, "run configuration (default: built-in verification config)");
  verify->add_option("--out", out, "output directory");

  auto* spectrum = app.add_subcommand("spectrum", "principal eigenvalue of the linearized operator along a run");
  spectrum->add_option("--config", config_path, "run configuration")->required();
  spectrum->add_option("--out", out, "output directory");

  auto* table = app.add_subcommand("ck-table", "empirical sup norms of the discrete characteristic");
  table->add_option("--max-k", max_k, "largest degree");
  table->add_option("--grid", grid, "number of cut fractions");
  table->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_config_error;
  }

  try {
    if (table->parsed()) {
      if (max_k < 0 || grid < 2) return fail(exit_config_error, "config_error", "ck-table: need max-k >= 0 and grid >= 2");
      std::vector<SupNormScan> scans;
      for (int k = 0; k <= max_k; ++k) scans.push_back(sup_norm_scan(k, grid));
      const fs::path dir = out.empty() ? fs::path("out") : fs::path(out);
      fs::create_directories(dir);
      std::ofstream csv(dir / "characteristic_constants.csv");
      write_constant_table(scans, csv);
      write_constant_table(scans, std::cout);
      return exit_success;
    }

    RunConfig cfg = config_path.empty() ? default_verify_config() : load_run_config(config_path);
    const fs::path dir = output_dir(cfg, out);

    if (solve->parsed()) {
      const SolveOutcome o = cmd_solve(cfg, dir);
      if (o.exit_code != exit_success) return fail(o.exit_code, "solver_failure", o.error);
      print_norms("u_h", *o.norms);
      if (o.error_norms) print_norms("u_h - u", *o.error_norms);
      return exit_success;
    }
    if (conv->parsed()) {
      const ConvergenceTable t = cmd_convergence(cfg, levels, parse_refine_mode(refine), dir);
      std::cout << " level      n      N       LinfL2        L2H1   ord(Linf) ord(H1)  ord(X)\n";
      for (const auto& r : t.rows) {
        std::cout << std::setw(6) << r.level << std::setw(7) << r.n << std::setw(7) << r.slabs << std::scientific
                  << std::setprecision(4) << std::setw(13) << r.errors.LinfL2 << std::setw(12) << r.errors.L2H1
                  << std::defaultfloat << "  ";
        print_order(r.order_LinfL2);
        print_order(r.order_L2H1);
        print_order(r.order_X);
        std::cout << '\n';
      }
      if (!t.complete) return fail(exit_solver_failure, "solver_failure", t.error);
      return exit_success;
    }
    if (sweep->parsed()) {
      const SweepResult r = cmd_stability_sweep(cfg, epsilons, dir);
      for (const auto& row : r.rows) {
        std::cout << "eps " << row.epsilon << ": ";
        if (row.ok)
          std::cout << "L2L2 " << row.scaled_L2L2 << "  eps*(LinfL2+L2H1) " << row.scaled_X << "  eps*L4L4^2 "
                    << row.scaled_L4 << '\n';
        else
          std::cout << "failed: " << row.error << '\n';
      }
      return r.exit_code;
    }
    if (verify->parsed()) {
      const VerifyResult r = cmd_verify(cfg, dir);
      for (const auto& c : r.checks) {
        std::cout << std::left << std::setw(26) << c.identity << std::right << ' ';
        if (c.skipped)
          std::cout << c.note << '\n';
        else
          std::cout << (c.passed() ? "PASS" : "FAIL") << "  residual " << std::scientific << std::setprecision(3)
                    << c.residual << "  threshold " << c.threshold << std::defaultfloat << '\n';
      }
      if (r.exit_code != exit_success)
        return fail(r.exit_code, r.exit_code == exit_identity_failure ? "identity_failure" : "solver_failure", r.error);
      return exit_success;
    }
    if (spectrum->parsed()) {
      const SpectrumOutcome o = cmd_spectrum(cfg, dir);
      if (o.exit_code != exit_success) return fail(o.exit_code, "solver_failure", o.error);
      for (std::size_t i = 0; i < o.trace.times.size(); ++i)
        std::cout << "t " << o.trace.times[i] << "  lambda_min " << o.trace.lambda_min[i] << '\n';
      std::cout << "C_s " << o.trace.C_s << '\n';
      return exit_success;
    }
  } catch (const ConfigError& e) {
    return fail(exit_config_error, "config_error", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(exit_config_error, "config_error", e.what());
  } catch (const std::exception& e) {
    return fail(exit_solver_failure, "solver_failure", e.what());
  }
  return exit_success;
}
