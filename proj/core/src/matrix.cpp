#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "fleetroute/osmnet.hpp"
#include "json.hpp"
#include "json_io.hpp"
#include "search.hpp"

namespace fleetroute {

using nlohmann::json;

unsigned default_worker_count() {
  if (const char* env = std::getenv("FLEETROUTE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

CostMatrixSet cost_matrices(const ProfiledGraph& g,
                            std::span<const NodeId> points, unsigned threads) {
  if (points.empty()) throw ValidationError("cost_matrices: no points");
  std::vector<std::uint32_t> index(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto idx = g.index_of(points[i]);
    if (!idx) {
      throw ValidationError("cost_matrices: node " + std::to_string(points[i]) +
                            " is not in the network");
    }
    index[i] = *idx;
  }

  const std::size_t n = points.size();
  CostMatrixSet m;
  m.profile = g.profile().name;
  m.points.assign(points.begin(), points.end());
  m.time_s.assign(n * n, kUnreachable);
  m.dist_m.assign(n * n, std::numeric_limits<double>::infinity());

  // Each row is owned by exactly one worker.
  std::atomic<std::size_t> next_row{0};
  auto worker = [&] {
    detail::SearchTree tree;
    for (std::size_t row = next_row++; row < n; row = next_row++) {
      tree.run(g, index[row]);
      for (std::size_t col = 0; col < n; ++col) {
        if (!tree.reached(index[col])) continue;
        m.time_s[row * n + col] = tree.time(index[col]);
        m.dist_m[row * n + col] = tree.dist(index[col]);
      }
    }
  };

  if (threads == 0) threads = default_worker_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return m;
}

CostMatrixSet CostMatrixSet::subset(std::span<const std::size_t> keep) const {
  const std::size_t n = points.size();
  CostMatrixSet out;
  out.profile = profile;
  for (const auto k : keep) {
    if (k >= n) throw ValidationError("matrix subset index out of range");
    out.points.push_back(points[k]);
  }
  out.time_s.reserve(keep.size() * keep.size());
  out.dist_m.reserve(keep.size() * keep.size());
  for (const auto i : keep) {
    for (const auto j : keep) {
      out.time_s.push_back(time_s[i * n + j]);
      out.dist_m.push_back(dist_m[i * n + j]);
    }
  }
  return out;
}

namespace detail {

json matrix_to_json(const CostMatrixSet& m) {
  const std::size_t n = m.size();
  json time = json::array();
  json dist = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json trow = json::array();
    json drow = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      if (!m.reachable(i, j)) {
        trow.push_back(nullptr);
        drow.push_back(nullptr);
      } else {
        trow.push_back(m.time(i, j));
        drow.push_back(static_cast<std::int64_t>(std::floor(m.dist(i, j) + 0.5)));
      }
    }
    time.push_back(std::move(trow));
    dist.push_back(std::move(drow));
  }
  json doc;
  doc["profile"] = m.profile;
  doc["points"] = m.points;
  doc["time_s"] = std::move(time);
  doc["dist_m"] = std::move(dist);
  return doc;
}

CostMatrixSet matrix_from_json(const json& doc) {
  CostMatrixSet m;
  m.profile = doc.at("profile").get<std::string>();
  m.points = doc.at("points").get<std::vector<NodeId>>();
  const std::size_t n = m.points.size();
  const auto& time = doc.at("time_s");
  const auto& dist = doc.at("dist_m");
  if (time.size() != n || dist.size() != n) {
    throw ParseError("matrix: row count does not match point count");
  }
  m.time_s.reserve(n * n);
  m.dist_m.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (time[i].size() != n || dist[i].size() != n) {
      throw ParseError("matrix: row " + std::to_string(i) + " has wrong length");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const bool t_null = time[i][j].is_null();
      if (t_null != dist[i][j].is_null()) {
        throw ParseError("matrix: time and distance disagree on reachability");
      }
      if (t_null) {
        m.time_s.push_back(kUnreachable);
        m.dist_m.push_back(std::numeric_limits<double>::infinity());
      } else {
        m.time_s.push_back(time[i][j].get<Seconds>());
        m.dist_m.push_back(dist[i][j].get<double>());
      }
    }
  }
  return m;
}

}  // namespace detail

std::string serialize_matrix(const CostMatrixSet& m) {
  return detail::matrix_to_json(m).dump();
}

CostMatrixSet parse_matrix(const std::string& text) {
  try {
    return detail::matrix_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

}  // namespace fleetroute
