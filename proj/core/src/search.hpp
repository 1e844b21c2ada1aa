#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fleetroute/osmnet.hpp"

namespace fleetroute::detail {

inline constexpr std::uint32_t kNoParent = UINT32_MAX;

// Reusable single-source search buffers. After run(), time[v] and length[v]
// hold the best (time, millimeters) pair and parent describes the
// lexicographically smallest path tree among those optimal paths.
class SearchTree {
 public:
  void run(const ProfiledGraph& g, std::uint32_t source,
           std::optional<std::uint32_t> target = std::nullopt);

  bool reached(std::uint32_t v) const { return tree_[v]; }
  Seconds time(std::uint32_t v) const { return time_[v]; }
  double dist(std::uint32_t v) const { return static_cast<double>(length_[v]) / 1000.0; }
  std::uint32_t parent(std::uint32_t v) const { return parent_[v]; }

 private:
  void reset(std::size_t n);
  void build_tree(const ProfiledGraph& g, std::uint32_t source);

  std::vector<Seconds> time_;
  std::vector<std::int64_t> length_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> settled_;
  std::vector<std::uint8_t> tree_;
  std::vector<std::uint32_t> touched_;
};

}  // namespace fleetroute::detail
