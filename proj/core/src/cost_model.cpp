#include "cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fleetroute {

const char* to_string(Neighborhood n) {
  switch (n) {
    case Neighborhood::relocate: return "relocate";
    case Neighborhood::exchange: return "exchange";
    case Neighborhood::two_opt_intra: return "two_opt_intra";
    case Neighborhood::or_opt: return "or_opt";
    case Neighborhood::change_vehicle_type: return "change_vehicle_type";
  }
  return "?";
}

const char* to_string(Granularity g) {
  return g == Granularity::minutes ? "minutes" : "seconds";
}

Granularity parse_granularity(const std::string& text) {
  if (text == "seconds") return Granularity::seconds;
  if (text == "minutes") return Granularity::minutes;
  throw ValidationError("granularity must be 'seconds' or 'minutes', got '" +
                        text + "'");
}

Seconds leg_cost(const ProblemInstance& inst, std::size_t vehicle_type,
                 std::size_t from, std::size_t to, Granularity granularity) {
  const Seconds s = inst.matrix_for(inst.fleet.at(vehicle_type)).time(from, to);
  if (s == kUnreachable) return kUnreachable;
  // Integer minutes truncate: legs under a minute cost nothing.
  return granularity == Granularity::minutes ? s / 60 : s;
}

Seconds auto_trip_cost(const ProblemInstance& inst, Granularity granularity) {
  const std::size_t n = inst.customer_count() + 1;
  Seconds max_leg = 0;
  for (std::size_t t = 0; t < inst.fleet.size(); ++t) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const Seconds c = leg_cost(inst, t, a, b, granularity);
        if (c != kUnreachable) max_leg = std::max(max_leg, c);
      }
    }
  }
  // A solution with k trips has n + k <= 2n legs.
  const auto legs = static_cast<Seconds>(2 * inst.customer_count());
  return legs * max_leg + 1;
}

Seconds trip_cost(const ProblemInstance& inst, const SolverConfig& config) {
  if (config.trip_cost) return *config.trip_cost;
  // Breaks never exceed the customer count, so the penalty cannot outweigh
  // a trip either.
  return auto_trip_cost(inst, config.granularity) +
         config.cluster_penalty_s * static_cast<Seconds>(inst.customer_count());
}

Evaluation evaluate(const ProblemInstance& inst, std::span<const Trip> trips,
                    const SolverConfig& config,
                    std::span<const ProximityCluster> clusters) {
  Evaluation ev;
  std::vector<StopSequence> sequences;
  for (std::size_t r = 0; r < trips.size(); ++r) {
    const auto& trip = trips[r];
    if (trip.vehicle_type >= inst.fleet.size()) {
      throw EvaluationError("trip " + std::to_string(r) +
                            ": unknown vehicle type index");
    }
    std::size_t prev = 0;
    for (std::size_t k = 0; k <= trip.stops.size(); ++k) {
      std::size_t next = 0;
      if (k < trip.stops.size()) {
        if (trip.stops[k] >= inst.customer_count()) {
          throw EvaluationError("trip " + std::to_string(r) +
                                ": customer index out of range");
        }
        next = trip.stops[k] + 1;
      }
      const Seconds c = leg_cost(inst, trip.vehicle_type, prev, next, config.granularity);
      if (c == kUnreachable) {
        auto name = [&](std::size_t node) {
          return node == 0 ? std::string("depot") : inst.customers[node - 1].id;
        };
        throw EvaluationError("trip " + std::to_string(r) + " leg " +
                              std::to_string(k) + " (" + name(prev) + " -> " +
                              name(next) + ") is unreachable for vehicle type " +
                              inst.fleet[trip.vehicle_type].name);
      }
      ev.travel_seconds += c;
      prev = next;
    }
    sequences.push_back(trip.stops);
  }
  ev.trip_count = static_cast<long long>(trips.size());
  ev.breaks = count_breaks(sequences, clusters);
  ev.penalty_seconds = config.cluster_penalty_s * ev.breaks;
  ev.objective = (trips.empty() ? 0 : trip_cost(inst, config)) * ev.trip_count +
                 ev.travel_seconds + ev.penalty_seconds;
  return ev;
}

std::vector<std::string> check_feasible(const ProblemInstance& inst,
                                        const Solution& sol) {
  std::vector<std::string> violations;
  std::vector<int> seen(inst.customer_count(), 0);
  for (std::size_t r = 0; r < sol.trips.size(); ++r) {
    const auto& trip = sol.trips[r];
    const std::string where = "trip " + std::to_string(r) + ": ";
    if (trip.stops.empty()) violations.push_back(where + "empty trip");
    if (trip.vehicle_type >= inst.fleet.size()) {
      violations.push_back(where + "unknown vehicle type");
      continue;
    }
    const auto& type = inst.fleet[trip.vehicle_type];
    if (type.count <= 0) {
      violations.push_back(where + "vehicle type " + type.name + " has count 0");
    }
    long long load = 0;
    bool indices_ok = true;
    for (const auto s : trip.stops) {
      if (s >= inst.customer_count()) {
        violations.push_back(where + "customer index " + std::to_string(s) +
                             " out of range");
        indices_ok = false;
        continue;
      }
      load += inst.customers[s].buckets;
      if (++seen[s] == 2) {
        violations.push_back("customer " + inst.customers[s].id + " visited more than once");
      }
    }
    if (load > type.capacity_buckets) {
      violations.push_back(where + "capacity exceeded by " +
                           std::to_string(load - type.capacity_buckets));
    }
    if (!indices_ok) continue;
    const auto& m = inst.matrix_for(type);
    std::size_t prev = 0;
    for (std::size_t k = 0; k <= trip.stops.size(); ++k) {
      const std::size_t next = k < trip.stops.size() ? trip.stops[k] + 1 : 0;
      if (!m.reachable(prev, next)) {
        violations.push_back(where + "leg " + std::to_string(k) + " is unreachable");
      }
      prev = next;
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] == 0) {
      violations.push_back("customer " + inst.customers[i].id + " unvisited");
    }
  }
  return violations;
}

std::vector<Leg> solution_legs(std::span<const Trip> trips) {
  std::vector<Leg> legs;
  for (const auto& trip : trips) {
    std::size_t prev = 0;
    for (const auto s : trip.stops) {
      legs.push_back({trip.vehicle_type, prev, s + 1});
      prev = s + 1;
    }
    legs.push_back({trip.vehicle_type, prev, 0});
  }
  return legs;
}

GlsState::GlsState(std::size_t vehicle_types, std::size_t matrix_size)
    : matrix_size_(matrix_size),
      penalties_(vehicle_types, std::vector<int>(matrix_size * matrix_size, 0)) {}

int GlsState::penalty(const Leg& leg) const {
  return penalties_[leg.vehicle_type][leg.from * matrix_size_ + leg.to];
}

void GlsState::init_lambda(double alpha, Seconds travel, std::size_t leg_count) {
  if (lambda_set_) return;
  lambda_set_ = true;
  const double mean = leg_count == 0 ? 0.0
                                     : static_cast<double>(travel) /
                                           static_cast<double>(leg_count);
  lambda_ = std::max<Seconds>(1, std::llround(alpha * mean));
}

Seconds GlsState::augmented(const Leg& leg, Seconds base) const {
  return base + lambda_ * penalty(leg);
}

__extension__ typedef __int128 Wide;

std::vector<Leg> GlsState::penalize(std::span<const Leg> legs,
                                    std::span<const Seconds> base_costs) {
  // Utility base / (1 + p), compared as exact fractions.
  std::optional<std::size_t> best;
  std::vector<Leg> chosen;
  auto better = [&](std::size_t a, std::size_t b) {
    const Wide lhs = static_cast<Wide>(base_costs[a]) * (1 + penalty(legs[b]));
    const Wide rhs = static_cast<Wide>(base_costs[b]) * (1 + penalty(legs[a]));
    return lhs > rhs ? 1 : (lhs == rhs ? 0 : -1);
  };
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (!best || better(i, *best) > 0) best = i;
  }
  if (!best) return chosen;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (better(i, *best) == 0 &&
        std::find(chosen.begin(), chosen.end(), legs[i]) == chosen.end()) {
      chosen.push_back(legs[i]);
    }
  }
  for (const auto& leg : chosen) {
    ++penalties_[leg.vehicle_type][leg.from * matrix_size_ + leg.to];
  }
  return chosen;
}

namespace detail {

CostModel::CostModel(const ProblemInstance& inst, const SolverConfig& config,
                     std::span<const ProximityCluster> clusters)
    : n_(inst.customer_count() + 1),
      trip_cost_(trip_cost(inst, config)),
      cluster_penalty_(config.cluster_penalty_s),
      cluster_count_(static_cast<long long>(clusters.size())) {
  legs_.resize(inst.fleet.size());
  for (std::size_t t = 0; t < inst.fleet.size(); ++t) {
    capacity_.push_back(inst.fleet[t].capacity_buckets);
    auto& legs = legs_[t];
    legs.resize(n_ * n_);
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        legs[a * n_ + b] = leg_cost(inst, t, a, b, config.granularity);
      }
    }
  }
  demand_.push_back(0);
  for (const auto& c : inst.customers) demand_.push_back(c.buckets);
  const auto labels = cluster_labels(clusters, inst.customer_count());
  label_.push_back(-1);
  label_.insert(label_.end(), labels.begin(), labels.end());
}

Solution finalize(const ProblemInstance& inst, std::vector<Trip> trips,
                  const SolverConfig& config,
                  std::span<const ProximityCluster> clusters) {
  const auto ev = evaluate(inst, trips, config, clusters);
  for (auto& trip : trips) {
    trip.load_buckets = 0;
    for (const auto s : trip.stops) trip.load_buckets += inst.customers[s].buckets;
    trip.travel_seconds = 0;
    std::size_t prev = 0;
    for (std::size_t k = 0; k <= trip.stops.size(); ++k) {
      const std::size_t next = k < trip.stops.size() ? trip.stops[k] + 1 : 0;
      trip.travel_seconds += leg_cost(inst, trip.vehicle_type, prev, next, config.granularity);
      prev = next;
    }
  }
  Solution sol;
  sol.trips = std::move(trips);
  sol.travel_seconds = ev.travel_seconds;
  sol.trip_count = ev.trip_count;
  sol.objective = ev.objective;
  sol.penalty_seconds = ev.penalty_seconds;
  sol.breaks = ev.breaks;
  sol.seed = config.seed;
  return sol;
}

}  // namespace detail
}  // namespace fleetroute
