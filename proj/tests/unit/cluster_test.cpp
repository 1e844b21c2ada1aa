#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "fleetroute/cluster.hpp"

using namespace fleetroute;

namespace {

const GeoPoint kOrigin{19.76, -72.20};

// Customers 20..31 of the out-and-back figure as indices 0..11: 20-24 and
// 30-31 sit at the road mouth, 25-29 run down the dead end.
std::vector<GeoPoint> out_and_back_layout() {
  std::vector<GeoPoint> pts(12);
  for (int k = 20; k <= 24; ++k) pts[k - 20] = fixtures::offset(kOrigin, 0.0, 10.0 * (k - 20));
  pts[10] = fixtures::offset(kOrigin, 12.0, 15.0);
  pts[11] = fixtures::offset(kOrigin, 12.0, 25.0);
  for (int k = 25; k <= 29; ++k) {
    pts[k - 20] = fixtures::offset(kOrigin, 0.0, 300.0 + 20.0 * (k - 25));
  }
  return pts;
}

std::size_t idx(int customer) { return static_cast<std::size_t>(customer - 20); }

StopSequence seq(std::initializer_list<int> customers) {
  StopSequence s;
  for (int c : customers) s.push_back(idx(c));
  return s;
}

}  // namespace

TEST(BuildClusters, TransitiveChain) {
  const std::vector<GeoPoint> pts{kOrigin, fixtures::offset(kOrigin, 20.0, 0.0),
                                  fixtures::offset(kOrigin, 40.0, 0.0)};
  const auto cs = build_clusters(pts, 25.0);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].members, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(BuildClusters, FarApartGivesNothing) {
  const std::vector<GeoPoint> pts{kOrigin, fixtures::offset(kOrigin, 30.0, 0.0),
                                  fixtures::offset(kOrigin, 0.0, 60.0)};
  EXPECT_TRUE(build_clusters(pts, 25.0).empty());
  EXPECT_TRUE(build_clusters(std::span<const GeoPoint>{}, 25.0).empty());
}

TEST(BuildClusters, OutAndBackLayout) {
  const auto cs = build_clusters(out_and_back_layout(), 25.0);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].members, seq({20, 21, 22, 23, 24, 30, 31}));
  EXPECT_EQ(cs[1].members, seq({25, 26, 27, 28, 29}));
  EXPECT_LT(cs[0].id, cs[1].id);
}

TEST(CountBreaks, OutAndBackOrders) {
  const std::vector<ProximityCluster> mouth{{0, seq({20, 21, 22, 23, 24, 30, 31})}};
  const std::vector<StopSequence> split{
      seq({20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31})};
  EXPECT_EQ(count_breaks(split, mouth), 1);
  const std::vector<StopSequence> contiguous{
      seq({20, 21, 22, 23, 24, 30, 31, 25, 26, 27, 28, 29})};
  EXPECT_EQ(count_breaks(contiguous, mouth), 0);
}

TEST(CountBreaks, CrossTrip) {
  const std::vector<ProximityCluster> c{{0, {0, 1}}};
  const std::vector<StopSequence> trips{{0, 2}, {1}};
  EXPECT_EQ(count_breaks(trips, c), 1);
  const std::vector<StopSequence> together{{2}, {1, 0}};
  EXPECT_EQ(count_breaks(together, c), 0);
  EXPECT_EQ(count_breaks(together, {}), 0);
}

TEST(CountBreaks, RunsAndLabels) {
  const std::vector<ProximityCluster> c{{0, {0, 1}}, {2, {2, 3}}};
  const auto labels = cluster_labels(c, 5);
  EXPECT_EQ(labels, (std::vector<int>{0, 0, 2, 2, -1}));
  EXPECT_EQ(count_runs({0, 2, 1, 3, 4}, labels), 4u);
  EXPECT_EQ(count_runs({0, 1, 4, 2, 3}, labels), 2u);
  // within-trip: a run of size 1 that interrupts another still counts
  const std::vector<StopSequence> trips{{0, 2, 1, 3}};
  EXPECT_EQ(count_breaks(trips, c), 2);
}

TEST(ClusterProperties, RadiusMonotone) {
  fixtures::Rng rng(2);
  std::uniform_real_distribution<double> coord(0.0, 200.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GeoPoint> pts;
    for (int i = 0; i < 25; ++i) pts.push_back(fixtures::offset(kOrigin, coord(rng), coord(rng)));
    std::vector<std::size_t> prev(pts.size(), 1);
    for (double r : {5.0, 10.0, 20.0, 25.0, 40.0, 80.0}) {
      const auto cs = build_clusters(pts, r);
      std::vector<std::size_t> size(pts.size(), 1);
      for (const auto& c : cs) {
        ASSERT_GE(c.members.size(), 2u);
        ASSERT_TRUE(std::is_sorted(c.members.begin(), c.members.end()));
        for (auto m : c.members) size[m] = c.members.size();
      }
      for (std::size_t i = 0; i < pts.size(); ++i) ASSERT_GE(size[i], prev[i]);
      prev = size;
    }
  }
}

TEST(ClusterProperties, SingleLinkageDefinition) {
  fixtures::Rng rng(12);
  std::uniform_real_distribution<double> coord(0.0, 150.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<GeoPoint> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(fixtures::offset(kOrigin, coord(rng), coord(rng)));
    const auto labels = cluster_labels(build_clusters(pts, 25.0), pts.size());
    // components by flood fill over the < radius relation
    std::vector<int> comp(pts.size(), -1);
    int next = 0;
    for (std::size_t s = 0; s < pts.size(); ++s) {
      if (comp[s] >= 0) continue;
      std::vector<std::size_t> stack{s};
      comp[s] = next;
      while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < pts.size(); ++v) {
          if (comp[v] < 0 && haversine_m(pts[u], pts[v]) < 25.0) {
            comp[v] = next;
            stack.push_back(v);
          }
        }
      }
      ++next;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (i == j) continue;
        ASSERT_EQ(comp[i] == comp[j], labels[i] >= 0 && labels[i] == labels[j]);
      }
    }
  }
}

TEST(ClusterProperties, ContiguousReorderingHasNoWithinTripBreaks) {
  fixtures::Rng rng(6);
  std::uniform_real_distribution<double> coord(0.0, 120.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GeoPoint> pts;
    for (int i = 0; i < 15; ++i) pts.push_back(fixtures::offset(kOrigin, coord(rng), coord(rng)));
    const auto cs = build_clusters(pts, 25.0);
    const auto labels = cluster_labels(cs, pts.size());
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<StopSequence> trips(1);
    for (auto c : order) {
      if (trips.back().size() >= 4) trips.emplace_back();
      trips.back().push_back(c);
    }
    // cross-trip breaks depend only on the partition, not on the order
    long long cross = 0;
    for (const auto& c : cs) {
      std::set<std::size_t> used;
      for (std::size_t t = 0; t < trips.size(); ++t) {
        for (auto m : c.members) {
          if (std::find(trips[t].begin(), trips[t].end(), m) != trips[t].end()) used.insert(t);
        }
      }
      cross += static_cast<long long>(used.size()) - 1;
    }
    for (auto& t : trips) {
      std::stable_sort(t.begin(), t.end(), [&](auto a, auto b) { return labels[a] < labels[b]; });
    }
    EXPECT_EQ(count_breaks(trips, cs), cross);
  }
}
