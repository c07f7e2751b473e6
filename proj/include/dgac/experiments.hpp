#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgac/diagnostics.hpp"
#include "dgac/forward_solver.hpp"
#include "dgac/mesh.hpp"

namespace dgac {

enum ExitCode : int { exit_success = 0, exit_solver_failure = 2, exit_identity_failure = 3, exit_config_error = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int dimension = 1;
  int mesh_n = 16;  // cells per side
  double final_time = 1.0;
  int slabs = 8;
  int k = 1;
  int l = 1;
  double epsilon = 0.5;
  std::string manufactured;     // exactly one of manufactured / initial_profile is set
  std::string initial_profile;
  NewtonConfig solver;
  int time_points = 0;          // 0 selects the default rule
  int space_order = 0;          // 0 selects 4 l
  bool under_integrate = false;
  std::string output_directory = "out";
  std::string run_id = "run";

  int cells() const { return dimension == 1 ? mesh_n : 2 * mesh_n * mesh_n; }
};

/// Strict parsing: unknown fields, wrong types and unknown ids raise ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);
/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// k = 1, l = 1, n = 16, N = 8, eps = 0.5, interface data.
RunConfig default_verify_config();

struct RunSetup {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const Discretization> disc;
  ProblemSpec problem;
};
RunSetup build_run(const RunConfig& cfg);

/// Norm CSV header: run_id,k,l,N,n_cells,epsilon,L2L2,LinfL2,L2H1,L4L4,jump_sum,config_hash.
std::string norm_csv_header();
std::string norm_csv_row(const RunConfig& cfg, const NormReport& r);

struct SolveOutcome {
  int exit_code = exit_success;
  std::optional<NormReport> norms;        // norms of u_h
  std::optional<NormReport> error_norms;  // norms of u_h - u when u is known
  std::string error;
};
/// Forward solve, checkpoint, norm CSV. Writes <out>/<run_id>/.
SolveOutcome cmd_solve(const RunConfig& cfg, const std::filesystem::path& out);

enum class RefineMode { time, space, both };
RefineMode parse_refine_mode(const std::string& s);

struct ConvergenceRow {
  int level = 0;
  int n = 0;
  int slabs = 0;
  double h = 0.0;
  double tau = 0.0;
  NormReport errors;
  double x_norm = 0.0;  // LinfL2 + L2H1
  // log2(e_coarse / e_fine) against the previous row; NaN on the first row
  double order_L2L2 = 0.0, order_LinfL2 = 0.0, order_L2H1 = 0.0, order_X = 0.0;
};
struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool complete = true;
  std::string error;
};
/// Refinement ladder on a manufactured problem; the config gives level 0.
ConvergenceTable cmd_convergence(const RunConfig& cfg, int levels, RefineMode refine, const std::filesystem::path& out);

/// Ladder of the parabolic projection or the local projection errors.
enum class ProjectionKind { parabolic, local };
ConvergenceTable projection_convergence(const RunConfig& cfg, int levels, RefineMode refine, ProjectionKind kind);

struct SweepRow {
  double epsilon = 0.0;
  bool ok = false;
  std::string error;
  NormReport norms;
  double scaled_L2L2 = 0.0;   // ||u_h||_{L2L2}
  double scaled_X = 0.0;      // eps (||u_h||_{LinfL2} + ||u_h||_{L2H1})
  double scaled_L4 = 0.0;     // eps ||u_h||^2_{L4L4}
};
struct SweepResult {
  std::vector<SweepRow> rows;
  int exit_code = exit_success;
};
SweepResult cmd_stability_sweep(const RunConfig& cfg, const std::vector<double>& epsilons,
                                const std::filesystem::path& out);

struct IdentityCheck {
  std::string identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double threshold = 0.0;
  bool skipped = false;
  std::string note;
  bool passed() const { return skipped || residual <= threshold; }
};
struct VerifyResult {
  std::vector<IdentityCheck> checks;
  int exit_code = exit_success;
  std::string error;
};
VerifyResult cmd_verify(const RunConfig& cfg, const std::filesystem::path& out);

struct SpectrumOutcome {
  SpectrumTrace trace;
  int exit_code = exit_success;
  std::string error;
};
/// lambda_min along the forward solution at the slab endpoints.
SpectrumOutcome cmd_spectrum(const RunConfig& cfg, const std::filesystem::path& out);

/// Structured error document written for failed runs.
nlohmann::json error_json(const std::string& kind, const std::string& message);

}  // namespace dgac
