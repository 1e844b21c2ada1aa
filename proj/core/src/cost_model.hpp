#pragma once

#include <vector>

#include "fleetroute/solver.hpp"

namespace fleetroute::detail {

// Dense per-vehicle-type leg costs plus the constants of the objective.
// Node indices are matrix indices: 0 is the depot, i + 1 is customer i.
class CostModel {
 public:
  CostModel(const ProblemInstance& inst, const SolverConfig& config,
            std::span<const ProximityCluster> clusters);

  std::size_t types() const noexcept { return capacity_.size(); }
  std::size_t size() const noexcept { return n_; }

  Seconds leg(std::size_t type, std::size_t a, std::size_t b) const {
    return legs_[type][a * n_ + b];
  }
  int capacity(std::size_t type) const { return capacity_[type]; }
  int demand(std::size_t node) const { return demand_[node]; }
  int label(std::size_t node) const { return label_[node]; }
  Seconds fixed_trip_cost() const noexcept { return trip_cost_; }
  Seconds cluster_penalty() const noexcept { return cluster_penalty_; }
  long long cluster_count() const noexcept { return cluster_count_; }

  // 1 when arriving at `b` starts a new run of b's cluster.
  int run_start(std::size_t a, std::size_t b) const {
    return label_[b] >= 0 && label_[b] != label_[a] ? 1 : 0;
  }

  // Leg cost + lambda * penalty + cluster run term; kUnreachable for
  // unreachable legs.
  Seconds pair(std::size_t type, std::size_t a, std::size_t b,
               const GlsState* gls) const {
    const Seconds base = leg(type, a, b);
    if (base == kUnreachable) return kUnreachable;
    Seconds c = base + cluster_penalty_ * run_start(a, b);
    if (gls != nullptr) c += gls->augmented({type, a, b}, 0);
    return c;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<Seconds>> legs_;
  std::vector<int> capacity_;
  std::vector<int> demand_;
  std::vector<int> label_;
  Seconds trip_cost_ = 0;
  Seconds cluster_penalty_ = 0;
  long long cluster_count_ = 0;
};

// Fills load, per-trip travel and the objective breakdown.
Solution finalize(const ProblemInstance& inst, std::vector<Trip> trips,
                  const SolverConfig& config,
                  std::span<const ProximityCluster> clusters);

}  // namespace fleetroute::detail
