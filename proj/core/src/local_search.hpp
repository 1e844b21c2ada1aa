#pragma once

#include <vector>

#include "cost_model.hpp"

namespace fleetroute::detail {

struct Route {
  std::size_t type = 0;
  std::vector<std::size_t> nodes;  // matrix indices, depot excluded
  int load = 0;
};

// Loads are recomputed from the instance.
std::vector<Route> to_routes(const ProblemInstance& inst, const Solution& sol);
std::vector<Trip> to_trips(const std::vector<Route>& routes);

// Mutable search state over a fixed cost model. Every step applies the best
// strictly improving move of one neighborhood, scanning trips then stops.
class LocalSearch {
 public:
  LocalSearch(const CostModel& cost, std::vector<Route> routes);

  bool step(Neighborhood neighborhood, const GlsState* gls);

  const std::vector<Route>& routes() const noexcept { return routes_; }

  // True objective (no GLS terms) of the current routes.
  Seconds true_objective() const;
  Seconds travel() const;

 private:
  struct Move;

  Seconds route_cost(const Route& r, std::size_t type, const GlsState* gls) const;
  std::size_t node(const Route& r, std::size_t pos) const;

  void scan_segment_moves(std::size_t max_len, bool reversals,
                          const GlsState* gls, Move& best) const;
  void scan_exchange(const GlsState* gls, Move& best) const;
  void scan_two_opt(const GlsState* gls, Move& best) const;
  void scan_change_type(const GlsState* gls, Move& best) const;
  void apply(const Move& move);

  const CostModel& cost_;
  std::vector<Route> routes_;
};

}  // namespace fleetroute::detail
