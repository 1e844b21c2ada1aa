#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "cost_model.hpp"

namespace fleetroute {

Solution construct_initial(const ProblemInstance& inst, const SolverConfig& config,
                           std::span<const ProximityCluster> clusters) {
  const detail::CostModel cost(inst, config, clusters);
  const std::size_t n = inst.customer_count();

  // Cheapest capable type per customer: lowest depot round trip, then the
  // larger capacity, then fleet order.
  std::vector<std::size_t> type_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t node = i + 1;
    std::optional<std::size_t> best;
    Seconds best_cost = 0;
    for (std::size_t t = 0; t < cost.types(); ++t) {
      if (cost.capacity(t) < cost.demand(node)) continue;
      const Seconds out = cost.leg(t, 0, node);
      const Seconds back = cost.leg(t, node, 0);
      if (out == kUnreachable || back == kUnreachable) continue;
      const Seconds round_trip = out + back;
      const bool take = !best || round_trip < best_cost ||
                        (round_trip == best_cost && cost.capacity(t) > cost.capacity(*best));
      if (take) {
        best = t;
        best_cost = round_trip;
      }
    }
    if (!best) {
      throw InfeasibleError("customer " + inst.customers[i].id +
                            " cannot be served by any vehicle type");
    }
    type_of[i] = *best;
  }

  std::vector<Trip> trips;
  for (std::size_t t = 0; t < cost.types(); ++t) {
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < n; ++i) {
      if (type_of[i] == t) group.push_back(i);
    }
    if (group.empty()) continue;

    // Each customer starts on its own route; route_of maps a customer to
    // the route holding it.
    std::map<std::size_t, StopSequence> routes;
    std::map<std::size_t, int> loads;
    std::vector<std::size_t> route_of(n, 0);
    for (const auto i : group) {
      routes[i] = {i};
      loads[i] = inst.customers[i].buckets;
      route_of[i] = i;
    }

    struct Saving {
      Seconds value;
      std::size_t from;
      std::size_t to;
    };
    std::vector<Saving> savings;
    for (const auto i : group) {
      for (const auto j : group) {
        if (i == j) continue;
        const Seconds ij = cost.leg(t, i + 1, j + 1);
        if (ij == kUnreachable) continue;
        savings.push_back({cost.leg(t, 0, i + 1) + cost.leg(t, j + 1, 0) - ij, i, j});
      }
    }
    std::stable_sort(savings.begin(), savings.end(), [](const auto& a, const auto& b) {
      if (a.value != b.value) return a.value > b.value;
      return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });

    // Every feasible merge removes a trip, which outweighs any travel
    // change, so non-positive savings are merged too.
    for (const auto& s : savings) {
      const auto ri = route_of[s.from];
      const auto rj = route_of[s.to];
      if (ri == rj) continue;
      auto& head = routes[ri];
      auto& tail = routes[rj];
      if (head.back() != s.from || tail.front() != s.to) continue;
      if (loads[ri] + loads[rj] > cost.capacity(t)) continue;
      for (const auto c : tail) route_of[c] = ri;
      head.insert(head.end(), tail.begin(), tail.end());
      loads[ri] += loads[rj];
      routes.erase(rj);
      loads.erase(rj);
    }
    for (auto& [key, stops] : routes) trips.push_back({t, std::move(stops), 0, 0});
  }
  return detail::finalize(inst, std::move(trips), config, clusters);
}

}  // namespace fleetroute
