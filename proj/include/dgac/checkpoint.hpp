#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dgac/dg_solution.hpp"

namespace dgac {

/// Manifest fields identifying the run a checkpoint belongs to.
struct CheckpointManifest {
  std::string config_hash;
  int k = 0;
  int l = 1;
  int slabs = 0;
  int cells = 0;
  int free_dofs = 0;
  double epsilon = 1.0;
  double final_time = 1.0;
};

/// Writes manifest.json and coefficients.json into `directory`.
void write_checkpoint(const std::filesystem::path& directory, const DgSolution& sol, const CheckpointManifest& manifest);

CheckpointManifest read_manifest(const std::filesystem::path& directory);

/// Reload a forward solution onto a matching discretization; sizes and the
/// time partition are checked against the manifest.
DgSolution read_checkpoint(const std::filesystem::path& directory, std::shared_ptr<const Discretization> disc);

nlohmann::json to_json(const CheckpointManifest& m);

}  // namespace dgac
