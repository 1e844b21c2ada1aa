#include <chrono>

#include "local_search.hpp"

namespace fleetroute {
namespace {

using Clock = std::chrono::steady_clock;

long long stall_limit(const SolverConfig& config, std::size_t customers) {
  if (config.stall_iterations >= 0) return config.stall_iterations;
  return 1000 + 50 * static_cast<long long>(customers);
}

}  // namespace

Solution gls_run(const ProblemInstance& inst, const SolverConfig& config,
                 std::span<const ProximityCluster> clusters) {
  if (!(config.time_limit_s > 0.0)) {
    throw ValidationError("time_limit_s must be positive");
  }
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(config.time_limit_s));
  auto expired = [&] { return Clock::now() >= deadline; };

  Solution initial = construct_initial(inst, config, clusters);
  if (expired()) {
    initial.truncated = true;
    return initial;
  }
  if (initial.trips.empty()) return initial;

  const detail::CostModel cost(inst, config, clusters);
  detail::LocalSearch search(cost, detail::to_routes(inst, initial));
  GlsState gls(cost.types(), cost.size());

  auto best_routes = search.routes();
  Seconds best_objective = search.true_objective();
  const long long stall_cap = stall_limit(config, inst.customer_count());
  long long iterations = 0;
  long long since_best = 0;
  bool out_of_time = false;

  while (!out_of_time) {
    // Descend to a local optimum of the augmented cost.
    bool improved = true;
    while (improved && !out_of_time) {
      improved = false;
      for (const auto nb : kAllNeighborhoods) {
        while (search.step(nb, &gls)) {
          improved = true;
          const Seconds obj = search.true_objective();
          if (obj < best_objective) {
            best_objective = obj;
            best_routes = search.routes();
            since_best = 0;
          }
          if (expired()) {
            out_of_time = true;
            break;
          }
        }
        if (out_of_time) break;
      }
    }
    if (out_of_time || expired()) {
      out_of_time = true;
      break;
    }

    const auto trips = detail::to_trips(search.routes());
    const auto legs = solution_legs(trips);
    std::vector<Seconds> base;
    base.reserve(legs.size());
    for (const auto& leg : legs) base.push_back(cost.leg(leg.vehicle_type, leg.from, leg.to));
    gls.init_lambda(config.gls_lambda_alpha, search.travel(), legs.size());
    gls.penalize(legs, base);

    ++iterations;
    ++since_best;
    if (config.max_iterations > 0 && iterations >= config.max_iterations) break;
    if (stall_cap > 0 && since_best >= stall_cap) break;
  }

  auto best = detail::finalize(inst, detail::to_trips(best_routes), config, clusters);
  best.iterations = iterations;
  best.truncated = out_of_time;
  return best;
}

Solution gls_run(const ProblemInstance& inst, const SolverConfig& config) {
  const auto clusters = build_clusters(inst, config.cluster_radius_m);
  return gls_run(inst, config, clusters);
}

}  // namespace fleetroute
