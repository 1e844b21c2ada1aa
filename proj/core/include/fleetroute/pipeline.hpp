#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fleetroute/model.hpp"
#include "fleetroute/solver.hpp"

namespace fleetroute {

struct RunPaths {
  std::filesystem::path network;
  std::filesystem::path profiles;
  std::filesystem::path customers;
  std::filesystem::path facilities;
  std::filesystem::path fleet;
  std::filesystem::path out_dir;
};

struct RunConfig {
  RunPaths paths;
  SolverConfig solver;
  double snap_radius_m = 100.0;
  double snap_warn_m = 50.0;
  std::vector<std::string> zones;  // empty = every zone found
  bool zone_split = true;
  std::optional<long long> baseline_trips;
  unsigned threads = 0;  // 0 = FLEETROUTE_THREADS or all cores
};

/// Reads run.json. Relative paths resolve against the config file's
/// directory.
RunConfig load_run_config(const std::filesystem::path& path);

enum class Command { matrix, solve, export_maps };

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,
  kExitInfeasible = 2,
  kExitInternal = 3,
};

// Each command reports progress on `out`, problems on `err`, and returns an
// exit code; exceptions are mapped to codes here.
int cmd_matrix(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_export(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_command(Command command, const RunConfig& config, std::ostream& out,
                std::ostream& err);

// File-system safe zone label used in output names.
std::string zone_file_label(const std::string& zone);

}  // namespace fleetroute
