// Copyright 2026 The Cargoswarm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cargoswarm {

/// Virtual node address. Ordering is lexicographic on (ix, iy) and is the
/// tie-break used by every planner in the library.
struct NodeId {
  int ix = 0;
  int iy = 0;

  auto operator<=>(const NodeId&) const = default;
};

struct NodeIdHash {
  std::size_t operator()(const NodeId& n) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.ix)) << 32) |
                                      static_cast<std::uint32_t>(n.iy));
  }
};

std::string to_string(const NodeId& n);

/// Metric position in meters; x east, y north, origin at node (0,0).
struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

/// Compass directions in neighbor expansion order.
enum class Direction : std::uint8_t { kEast = 0, kNorth = 1, kWest = 2, kSouth = 3 };

inline constexpr std::array<Direction, 4> kAllDirections = {Direction::kEast, Direction::kNorth,
                                                            Direction::kWest, Direction::kSouth};

/// Heading of a direction in degrees, east = 0, counter-clockwise positive.
double heading_deg(Direction d);
NodeId step_toward(const NodeId& n, Direction d);
/// Direction of travel between two 4-adjacent nodes. Throws kInvalidArgument otherwise.
Direction direction_between(const NodeId& from, const NodeId& to);
/// Number of quarter turns (0, 1 or 2) needed to rotate from one heading to another.
int quarter_turns(Direction from, Direction to);

int manhattan(const NodeId& a, const NodeId& b);

/// Up to four neighbors, stored inline.
class NeighborList {
 public:
  void push_back(const NodeId& n) { items_[count_++] = n; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  const NodeId& operator[](std::size_t i) const { return items_[i]; }
  const NodeId* begin() const { return items_.data(); }
  const NodeId* end() const { return items_.data() + count_; }
  std::vector<NodeId> to_vector() const { return {begin(), end()}; }

 private:
  std::array<NodeId, 4> items_{};
  std::size_t count_ = 0;
};

/// Virtual-node decomposition of a rectangular terrain.
///
/// Nodes sit on a square lattice of pitch `spacing_m` anchored at the metric
/// origin, so node (ix, iy) lives at (ix * spacing, iy * spacing). The lattice
/// is 4-connected; blocked nodes are removed from the connectivity but keep
/// their address.
class GridMap {
 public:
  /// Throws kNonPositiveDimension or kSpacingTooLarge.
  static GridMap build(double width_m, double height_m, double spacing_m);

  double width_m() const { return width_m_; }
  double height_m() const { return height_m_; }
  double spacing_m() const { return spacing_m_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int node_count() const { return nx_ * ny_; }

  bool contains(const NodeId& n) const { return n.ix >= 0 && n.iy >= 0 && n.ix < nx_ && n.iy < ny_; }
  bool is_blocked(const NodeId& n) const;
  bool is_free(const NodeId& n) const { return contains(n) && !is_blocked(n); }
  void block(const NodeId& n);
  void unblock(const NodeId& n);
  /// Blocked nodes in ascending NodeId order.
  std::vector<NodeId> blocked() const;

  /// Dense index in [0, node_count()), row-major on iy.
  int index_of(const NodeId& n) const { return n.iy * nx_ + n.ix; }
  NodeId node_at(int index) const { return {index % nx_, index / nx_}; }

  /// Throws kNodeOutOfRange.
  Position node_to_position(const NodeId& n) const;
  /// Nearest node by Euclidean distance; midpoint ties go to the lower index.
  /// Throws kOutOfTerrain.
  NodeId position_to_nearest_node(const Position& p) const;
  bool in_terrain(const Position& p, double tolerance = 1e-9) const;

  /// Unblocked in-bounds 4-neighbors ordered East, North, West, South.
  NeighborList neighbors(const NodeId& n) const;

  /// Hop diameter of the unobstructed lattice.
  int diameter_hops() const { return (nx_ - 1) + (ny_ - 1); }

 private:
  GridMap(double width_m, double height_m, double spacing_m, int nx, int ny);

  void require(const NodeId& n) const;

  double width_m_;
  double height_m_;
  double spacing_m_;
  int nx_;
  int ny_;
  std::vector<std::uint8_t> blocked_;
};

}  // namespace cargoswarm
