#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fleetroute/cluster.hpp"
#include "fleetroute/model.hpp"

namespace fleetroute {

enum class Granularity { seconds, minutes };

enum class Neighborhood {
  relocate,
  exchange,
  two_opt_intra,
  or_opt,
  change_vehicle_type,
};

inline constexpr Neighborhood kAllNeighborhoods[] = {
    Neighborhood::relocate, Neighborhood::exchange, Neighborhood::two_opt_intra,
    Neighborhood::or_opt, Neighborhood::change_vehicle_type};

const char* to_string(Neighborhood n);
const char* to_string(Granularity g);
Granularity parse_granularity(const std::string& text);

struct SolverConfig {
  std::uint64_t seed = 0;
  double time_limit_s = 10.0;
  double gls_lambda_alpha = 0.1;
  // Fixed cost per trip; unset means auto (see auto_trip_cost).
  std::optional<Seconds> trip_cost;
  Seconds cluster_penalty_s = 120;
  double cluster_radius_m = 25.0;
  Granularity granularity = Granularity::seconds;
  // Stop after this many penalty rounds (0 = no cap).
  long long max_iterations = 0;
  // Stop after this many penalty rounds without a new best (0 = no cap,
  // negative = auto, scaled to the instance size).
  long long stall_iterations = -1;
};

struct Trip {
  std::size_t vehicle_type = 0;  // index into ProblemInstance::fleet
  StopSequence stops;            // customer indices
  int load_buckets = 0;
  Seconds travel_seconds = 0;
};

struct Solution {
  std::vector<Trip> trips;
  Seconds travel_seconds = 0;
  long long trip_count = 0;
  Seconds objective = 0;
  Seconds penalty_seconds = 0;
  long long breaks = 0;
  bool truncated = false;
  std::uint64_t seed = 0;
  long long iterations = 0;
};

struct Evaluation {
  Seconds objective = 0;
  Seconds travel_seconds = 0;
  long long trip_count = 0;
  Seconds penalty_seconds = 0;
  long long breaks = 0;
};

// Leg cost between matrix indices (0 = depot, i + 1 = customer i) in the
// configured granularity; kUnreachable when there is no path.
Seconds leg_cost(const ProblemInstance& inst, std::size_t vehicle_type,
                 std::size_t from, std::size_t to, Granularity granularity);

/// 2n x (largest finite leg) + 1: exceeds the travel of any solution, so one
/// trip fewer always wins regardless of travel time.
Seconds auto_trip_cost(const ProblemInstance& inst, Granularity granularity);

// Configured trip cost, else auto_trip_cost plus cluster_penalty_s * n.
Seconds trip_cost(const ProblemInstance& inst, const SolverConfig& config);

/// Recomputes every objective component from the matrices. Throws
/// EvaluationError on an unreachable leg or a malformed trip.
Evaluation evaluate(const ProblemInstance& inst, std::span<const Trip> trips,
                    const SolverConfig& config,
                    std::span<const ProximityCluster> clusters);

/// Clarke-Wright parallel savings per vehicle type. Each customer is
/// assigned the capable type with the cheapest depot round trip.
Solution construct_initial(const ProblemInstance& inst, const SolverConfig& config,
                           std::span<const ProximityCluster> clusters = {});

// A directed leg of a trip, in matrix indices.
struct Leg {
  std::size_t vehicle_type = 0;
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const Leg&, const Leg&) = default;
};

std::vector<Leg> solution_legs(std::span<const Trip> trips);

/// Guided local search memory: a penalty count per (vehicle type, directed
/// leg) and the lambda weight applied to it in the augmented cost.
class GlsState {
 public:
  GlsState(std::size_t vehicle_types, std::size_t matrix_size);

  int penalty(const Leg& leg) const;
  Seconds lambda() const noexcept { return lambda_; }
  bool lambda_set() const noexcept { return lambda_set_; }

  // lambda = max(1, round(alpha * travel / legs)). Only the first call has
  // an effect.
  void init_lambda(double alpha, Seconds travel, std::size_t leg_count);

  // Base cost + lambda * penalty.
  Seconds augmented(const Leg& leg, Seconds base) const;

  /// Increments the penalty of every leg with the maximal utility
  /// base / (1 + penalty). Returns the penalized legs.
  std::vector<Leg> penalize(std::span<const Leg> legs,
                            std::span<const Seconds> base_costs);

 private:
  std::size_t matrix_size_;
  std::vector<std::vector<int>> penalties_;
  Seconds lambda_ = 0;
  bool lambda_set_ = false;
};

/// Best-improvement move of one neighborhood under the augmented cost (base
/// cost when `gls` is null). Moves keep capacity and reachability. Returns
/// nullopt when no move improves.
std::optional<Solution> local_search_step(
    const ProblemInstance& inst, const Solution& sol, Neighborhood neighborhood,
    const SolverConfig& config, std::span<const ProximityCluster> clusters,
    const GlsState* gls = nullptr);

/// Construction followed by guided local search until the time limit or
/// the iteration caps. Returns the best solution by true objective.
Solution gls_run(const ProblemInstance& inst, const SolverConfig& config,
                 std::span<const ProximityCluster> clusters);
Solution gls_run(const ProblemInstance& inst, const SolverConfig& config);

/// Coverage, capacity, reachability and fleet checks. Empty means feasible.
std::vector<std::string> check_feasible(const ProblemInstance& inst,
                                        const Solution& sol);

std::string serialize_solution(const ProblemInstance& inst, const Solution& sol,
                               std::span<const ProximityCluster> clusters,
                               const std::string& zone = {});
Solution parse_solution(const ProblemInstance& inst, const std::string& text);

}  // namespace fleetroute
