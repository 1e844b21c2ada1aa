// fleetroute: matrix | solve | export over a run.json configuration.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fleetroute/errors.hpp"
#include "fleetroute/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::vector<std::string> zones;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_limit;
  std::optional<long long> baseline_trips;
  bool no_zone_split = false;
  std::optional<std::string> granularity;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "run configuration (JSON)")->required();
  sub->add_option("--zones", o.zones, "only these zones")->delimiter(',');
  sub->add_option("--seed", o.seed, "solver seed");
  sub->add_option("--time-limit", o.time_limit, "solver budget per zone, seconds");
  sub->add_option("--baseline-trips", o.baseline_trips, "reference trip count for the summary");
  sub->add_flag("--no-zone-split", o.no_zone_split, "solve all customers as one zone");
  sub->add_option("--granularity", o.granularity, "seconds|minutes")
      ->check(CLI::IsMember({"seconds", "minutes"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-fleet multi-trip collection routing"};
  app.require_subcommand(1);
  Overrides o;
  auto* matrix = app.add_subcommand("matrix", "snap inputs and compute cost matrices");
  auto* solve = app.add_subcommand("solve", "solve every zone");
  auto* exp = app.add_subcommand("export", "write GeoJSON, SVG and the summary");
  for (auto* sub : {matrix, solve, exp}) add_common(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fleetroute::kExitInput;
  }

  fleetroute::RunConfig config;
  try {
    config = fleetroute::load_run_config(o.config);
    if (!o.zones.empty()) config.zones = o.zones;
    if (o.seed) config.solver.seed = *o.seed;
    if (o.time_limit) {
      if (!(*o.time_limit > 0.0)) throw fleetroute::ValidationError("--time-limit must be positive");
      config.solver.time_limit_s = *o.time_limit;
    }
    if (o.baseline_trips) config.baseline_trips = *o.baseline_trips;
    if (o.no_zone_split) config.zone_split = false;
    if (o.granularity) config.solver.granularity = fleetroute::parse_granularity(*o.granularity);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fleetroute::kExitInput;
  }

  auto command = fleetroute::Command::matrix;
  if (solve->parsed()) command = fleetroute::Command::solve;
  if (exp->parsed()) command = fleetroute::Command::export_maps;
  return fleetroute::run_command(command, config, std::cout, std::cerr);
}
