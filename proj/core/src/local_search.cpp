#include "local_search.hpp"

#include <algorithm>

namespace fleetroute {
namespace detail {
namespace {

constexpr Seconds kInf = kUnreachable;
constexpr std::size_t kExchangeSpan = 2;

// Sum that saturates at kInf.
Seconds add(Seconds a, Seconds b) {
  return (a == kInf || b == kInf) ? kInf : a + b;
}

}  // namespace

struct LocalSearch::Move {
  enum class Kind { none, segment, exchange, two_opt, change_type };
  Kind kind = Kind::none;
  Seconds delta = 0;
  std::size_t from_route = 0;
  std::size_t from_pos = 0;
  std::size_t length = 0;
  std::size_t to_route = 0;
  std::size_t to_pos = 0;
  std::size_t length_b = 0;
  bool reversed = false;
  std::size_t type = 0;

  void offer(const Move& m) {
    if (m.delta < delta) *this = m;
  }
};

std::vector<Route> to_routes(const ProblemInstance& inst, const Solution& sol) {
  std::vector<Route> routes;
  for (const auto& trip : sol.trips) {
    Route r;
    r.type = trip.vehicle_type;
    for (const auto s : trip.stops) r.nodes.push_back(s + 1);
    for (const auto s : trip.stops) r.load += inst.customers.at(s).buckets;
    routes.push_back(std::move(r));
  }
  return routes;
}

std::vector<Trip> to_trips(const std::vector<Route>& routes) {
  std::vector<Trip> trips;
  for (const auto& r : routes) {
    Trip t;
    t.vehicle_type = r.type;
    for (const auto n : r.nodes) t.stops.push_back(n - 1);
    trips.push_back(std::move(t));
  }
  return trips;
}

LocalSearch::LocalSearch(const CostModel& cost, std::vector<Route> routes)
    : cost_(cost), routes_(std::move(routes)) {
  for (auto& r : routes_) {
    r.load = 0;
    for (const auto n : r.nodes) r.load += cost_.demand(n);
  }
}

std::size_t LocalSearch::node(const Route& r, std::size_t pos) const {
  // Position 0 and size + 1 are the depot.
  return (pos == 0 || pos > r.nodes.size()) ? 0 : r.nodes[pos - 1];
}

Seconds LocalSearch::route_cost(const Route& r, std::size_t type,
                                const GlsState* gls) const {
  Seconds total = 0;
  std::size_t prev = 0;
  for (const auto n : r.nodes) {
    total = add(total, cost_.pair(type, prev, n, gls));
    prev = n;
  }
  return add(total, cost_.pair(type, prev, 0, gls));
}

Seconds LocalSearch::travel() const {
  Seconds total = 0;
  for (const auto& r : routes_) {
    std::size_t prev = 0;
    for (const auto n : r.nodes) {
      total += cost_.leg(r.type, prev, n);
      prev = n;
    }
    total += cost_.leg(r.type, prev, 0);
  }
  return total;
}

Seconds LocalSearch::true_objective() const {
  Seconds total = 0;
  for (const auto& r : routes_) {
    total += route_cost(r, r.type, nullptr) + cost_.fixed_trip_cost();
  }
  // Each cluster contributes one unpenalized run.
  return total - cost_.cluster_penalty() * cost_.cluster_count();
}

// Moves a block of 1..max_len consecutive stops to another gap, in the same
// trip or another one, optionally reversed.
void LocalSearch::scan_segment_moves(std::size_t max_len, bool reversals,
                                     const GlsState* gls, Move& best) const {
  for (std::size_t ra = 0; ra < routes_.size(); ++ra) {
    const Route& a = routes_[ra];
    const std::size_t k = a.nodes.size();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t len = 1; len <= max_len && i + len <= k; ++len) {
        const std::size_t prev = node(a, i);
        const std::size_t next = node(a, i + len + 1);
        const std::size_t s_first = a.nodes[i];
        const std::size_t s_last = a.nodes[i + len - 1];
        int seg_load = 0;
        for (std::size_t q = i; q < i + len; ++q) seg_load += cost_.demand(a.nodes[q]);

        auto internal = [&](std::size_t type, bool rev) {
          Seconds c = 0;
          for (std::size_t q = i; q + 1 < i + len; ++q) {
            c = rev ? add(c, cost_.pair(type, a.nodes[q + 1], a.nodes[q], gls))
                    : add(c, cost_.pair(type, a.nodes[q], a.nodes[q + 1], gls));
          }
          return c;
        };

        const Seconds removed = cost_.pair(a.type, prev, s_first, gls) +
                                internal(a.type, false) +
                                cost_.pair(a.type, s_last, next, gls);
        const bool whole = len == k;
        Seconds removal_delta = 0;
        if (whole) {
          removal_delta = -removed - cost_.fixed_trip_cost();
        } else {
          const Seconds bridge = cost_.pair(a.type, prev, next, gls);
          if (bridge == kInf) continue;
          removal_delta = bridge - removed;
        }

        for (int orient = 0; orient < ((reversals && len > 1) ? 2 : 1); ++orient) {
          const bool rev = orient == 1;
          const std::size_t first = rev ? s_last : s_first;
          const std::size_t last = rev ? s_first : s_last;

          for (std::size_t rb = 0; rb < routes_.size(); ++rb) {
            const Route& b = routes_[rb];
            const bool same = rb == ra;
            if (same && whole) continue;
            if (!same && b.load + seg_load > cost_.capacity(b.type)) continue;
            const Seconds inner = internal(b.type, rev);
            if (inner == kInf) continue;
            const std::size_t kb = b.nodes.size();
            for (std::size_t p = 0; p <= kb; ++p) {
              // Gaps touching the segment are the identity or a reversal.
              if (same && p >= i && p <= i + len) continue;
              const std::size_t x = node(b, p);
              const std::size_t y = node(b, p + 1);
              const Seconds in = add(add(cost_.pair(b.type, x, first, gls), inner),
                                     cost_.pair(b.type, last, y, gls));
              if (in == kInf) continue;
              Move m;
              m.kind = Move::Kind::segment;
              m.delta = removal_delta + in - cost_.pair(b.type, x, y, gls);
              m.from_route = ra;
              m.from_pos = i;
              m.length = len;
              m.to_route = rb;
              m.to_pos = p;
              m.reversed = rev;
              best.offer(m);
            }
          }
        }
      }
    }
  }
}

// Swaps two stops of one trip, or blocks of 1..kExchangeSpan consecutive
// stops between two trips (orientation kept).
void LocalSearch::scan_exchange(const GlsState* gls, Move& best) const {
  for (std::size_t ra = 0; ra < routes_.size(); ++ra) {
    const Route& a = routes_[ra];
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      const std::size_t u = a.nodes[i];
      const std::size_t pu = node(a, i);
      const std::size_t nu = node(a, i + 2);
      for (std::size_t j = i + 1; j < a.nodes.size(); ++j) {
        const std::size_t v = a.nodes[j];
        const std::size_t pv = node(a, j);
        const std::size_t nv = node(a, j + 2);
        Seconds delta = 0;
        if (j == i + 1) {
          const Seconds in = add(add(cost_.pair(a.type, pu, v, gls),
                                     cost_.pair(a.type, v, u, gls)),
                                 cost_.pair(a.type, u, nv, gls));
          if (in == kInf) continue;
          delta = in - cost_.pair(a.type, pu, u, gls) - cost_.pair(a.type, u, v, gls) -
                  cost_.pair(a.type, v, nv, gls);
        } else {
          const Seconds in = add(add(cost_.pair(a.type, pu, v, gls),
                                     cost_.pair(a.type, v, nu, gls)),
                                 add(cost_.pair(a.type, pv, u, gls),
                                     cost_.pair(a.type, u, nv, gls)));
          if (in == kInf) continue;
          delta = in - cost_.pair(a.type, pu, u, gls) - cost_.pair(a.type, u, nu, gls) -
                  cost_.pair(a.type, pv, v, gls) - cost_.pair(a.type, v, nv, gls);
        }
        Move m;
        m.kind = Move::Kind::exchange;
        m.delta = delta;
        m.from_route = ra;
        m.from_pos = i;
        m.length = 1;
        m.to_route = ra;
        m.to_pos = j;
        m.length_b = 1;
        best.offer(m);
      }
    }
  }

  // Cost of the block nodes[i, i + len) of `r` driven by `type`, entered
  // from `before` and left towards `after`.
  auto block = [&](const Route& r, std::size_t i, std::size_t len, std::size_t type,
                   std::size_t before, std::size_t after) {
    Seconds c = cost_.pair(type, before, r.nodes[i], gls);
    for (std::size_t q = i; q + 1 < i + len; ++q) {
      c = add(c, cost_.pair(type, r.nodes[q], r.nodes[q + 1], gls));
    }
    return add(c, cost_.pair(type, r.nodes[i + len - 1], after, gls));
  };
  auto load = [&](const Route& r, std::size_t i, std::size_t len) {
    int l = 0;
    for (std::size_t q = i; q < i + len; ++q) l += cost_.demand(r.nodes[q]);
    return l;
  };

  for (std::size_t ra = 0; ra < routes_.size(); ++ra) {
    const Route& a = routes_[ra];
    for (std::size_t rb = ra + 1; rb < routes_.size(); ++rb) {
      const Route& b = routes_[rb];
      for (std::size_t la = 1; la <= kExchangeSpan; ++la) {
        for (std::size_t i = 0; i + la <= a.nodes.size(); ++i) {
          const std::size_t pu = node(a, i);
          const std::size_t nu = node(a, i + la + 1);
          const int load_a = load(a, i, la);
          const Seconds out_a = block(a, i, la, a.type, pu, nu);
          for (std::size_t lb = 1; lb <= kExchangeSpan; ++lb) {
            for (std::size_t j = 0; j + lb <= b.nodes.size(); ++j) {
              const int load_b = load(b, j, lb);
              if (a.load - load_a + load_b > cost_.capacity(a.type) ||
                  b.load - load_b + load_a > cost_.capacity(b.type)) {
                continue;
              }
              const std::size_t pv = node(b, j);
              const std::size_t nv = node(b, j + lb + 1);
              const Seconds in = add(block(b, j, lb, a.type, pu, nu),
                                     block(a, i, la, b.type, pv, nv));
              if (in == kInf) continue;
              Move m;
              m.kind = Move::Kind::exchange;
              m.delta = in - out_a - block(b, j, lb, b.type, pv, nv);
              m.from_route = ra;
              m.from_pos = i;
              m.length = la;
              m.to_route = rb;
              m.to_pos = j;
              m.length_b = lb;
              best.offer(m);
            }
          }
        }
      }
    }
  }
}

// Reverses stops [a, b] (1-based positions) of one trip.
void LocalSearch::scan_two_opt(const GlsState* gls, Move& best) const {
  std::vector<Seconds> fwd;
  std::vector<Seconds> bwd;
  std::vector<int> bwd_inf;
  for (std::size_t r = 0; r < routes_.size(); ++r) {
    const Route& route = routes_[r];
    const std::size_t k = route.nodes.size();
    if (k < 2) continue;
    fwd.assign(k + 2, 0);
    bwd.assign(k + 2, 0);
    bwd_inf.assign(k + 2, 0);
    for (std::size_t q = 0; q <= k; ++q) {
      fwd[q + 1] = fwd[q] + cost_.pair(route.type, node(route, q), node(route, q + 1), gls);
      const Seconds back = cost_.pair(route.type, node(route, q + 1), node(route, q), gls);
      bwd_inf[q + 1] = bwd_inf[q] + (back == kInf ? 1 : 0);
      bwd[q + 1] = bwd[q] + (back == kInf ? 0 : back);
    }
    for (std::size_t a = 1; a < k; ++a) {
      for (std::size_t b = a + 1; b <= k; ++b) {
        if (bwd_inf[b] - bwd_inf[a] > 0) continue;
        const std::size_t before = node(route, a - 1);
        const std::size_t after = node(route, b + 1);
        const Seconds in = add(cost_.pair(route.type, before, node(route, b), gls),
                               cost_.pair(route.type, node(route, a), after, gls));
        if (in == kInf) continue;
        const Seconds out = cost_.pair(route.type, before, node(route, a), gls) +
                            cost_.pair(route.type, node(route, b), after, gls);
        Move m;
        m.kind = Move::Kind::two_opt;
        m.delta = in + (bwd[b] - bwd[a]) - out - (fwd[b] - fwd[a]);
        m.from_route = r;
        m.from_pos = a;
        m.to_pos = b;
        best.offer(m);
      }
    }
  }
}

void LocalSearch::scan_change_type(const GlsState* gls, Move& best) const {
  for (std::size_t r = 0; r < routes_.size(); ++r) {
    const Route& route = routes_[r];
    const Seconds current = route_cost(route, route.type, gls);
    for (std::size_t t = 0; t < cost_.types(); ++t) {
      if (t == route.type || route.load > cost_.capacity(t)) continue;
      const Seconds c = route_cost(route, t, gls);
      if (c == kInf) continue;
      Move m;
      m.kind = Move::Kind::change_type;
      m.delta = c - current;
      m.from_route = r;
      m.type = t;
      best.offer(m);
    }
  }
}

void LocalSearch::apply(const Move& m) {
  switch (m.kind) {
    case Move::Kind::none:
      return;
    case Move::Kind::segment: {
      Route& a = routes_[m.from_route];
      std::vector<std::size_t> seg(a.nodes.begin() + m.from_pos,
                                   a.nodes.begin() + m.from_pos + m.length);
      int seg_load = 0;
      for (const auto n : seg) seg_load += cost_.demand(n);
      if (m.reversed) std::reverse(seg.begin(), seg.end());
      if (m.from_route == m.to_route) {
        a.nodes.erase(a.nodes.begin() + m.from_pos,
                      a.nodes.begin() + m.from_pos + m.length);
        const std::size_t p = m.to_pos < m.from_pos ? m.to_pos : m.to_pos - m.length;
        a.nodes.insert(a.nodes.begin() + p, seg.begin(), seg.end());
        return;
      }
      Route& b = routes_[m.to_route];
      b.nodes.insert(b.nodes.begin() + m.to_pos, seg.begin(), seg.end());
      b.load += seg_load;
      a.nodes.erase(a.nodes.begin() + m.from_pos,
                    a.nodes.begin() + m.from_pos + m.length);
      a.load -= seg_load;
      if (a.nodes.empty()) routes_.erase(routes_.begin() + m.from_route);
      return;
    }
    case Move::Kind::exchange: {
      Route& a = routes_[m.from_route];
      if (m.from_route == m.to_route) {
        std::swap(a.nodes[m.from_pos], a.nodes[m.to_pos]);
        return;
      }
      Route& b = routes_[m.to_route];
      const auto a_first = a.nodes.begin() + m.from_pos;
      const auto b_first = b.nodes.begin() + m.to_pos;
      std::vector<std::size_t> from_a(a_first, a_first + m.length);
      std::vector<std::size_t> from_b(b_first, b_first + m.length_b);
      int moved = 0;
      for (const auto n : from_a) moved += cost_.demand(n);
      for (const auto n : from_b) moved -= cost_.demand(n);
      a.nodes.erase(a_first, a_first + m.length);
      a.nodes.insert(a.nodes.begin() + m.from_pos, from_b.begin(), from_b.end());
      b.nodes.erase(b_first, b_first + m.length_b);
      b.nodes.insert(b.nodes.begin() + m.to_pos, from_a.begin(), from_a.end());
      a.load -= moved;
      b.load += moved;
      return;
    }
    case Move::Kind::two_opt: {
      Route& r = routes_[m.from_route];
      std::reverse(r.nodes.begin() + (m.from_pos - 1), r.nodes.begin() + m.to_pos);
      return;
    }
    case Move::Kind::change_type:
      routes_[m.from_route].type = m.type;
      return;
  }
}

bool LocalSearch::step(Neighborhood neighborhood, const GlsState* gls) {
  Move best;
  switch (neighborhood) {
    case Neighborhood::relocate:
      scan_segment_moves(1, false, gls, best);
      break;
    case Neighborhood::exchange:
      scan_exchange(gls, best);
      break;
    case Neighborhood::two_opt_intra:
      scan_two_opt(gls, best);
      break;
    case Neighborhood::or_opt:
      scan_segment_moves(3, true, gls, best);
      break;
    case Neighborhood::change_vehicle_type:
      scan_change_type(gls, best);
      break;
  }
  if (best.kind == Move::Kind::none) return false;
  apply(best);
  return true;
}

}  // namespace detail

std::optional<Solution> local_search_step(
    const ProblemInstance& inst, const Solution& sol, Neighborhood neighborhood,
    const SolverConfig& config, std::span<const ProximityCluster> clusters,
    const GlsState* gls) {
  const detail::CostModel cost(inst, config, clusters);
  detail::LocalSearch ls(cost, detail::to_routes(inst, sol));
  if (!ls.step(neighborhood, gls)) return std::nullopt;
  auto out = detail::finalize(inst, detail::to_trips(ls.routes()), config, clusters);
  out.seed = sol.seed;
  return out;
}

}  // namespace fleetroute
