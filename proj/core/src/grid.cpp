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

#include "cargoswarm/grid.hpp"

#include <algorithm>
#include <cmath>

#include "cargoswarm/error.hpp"

namespace cargoswarm {

namespace {

// Guards floor(w / s) against representation error, e.g. 2.0 / 0.1.
constexpr double kCountEpsilon = 1e-9;

int snap_axis(double coord, double spacing, int count) {
  // ceil(q - 0.5) rounds to nearest with exact halves going down.
  const double q = coord / spacing;
  int i = static_cast<int>(std::ceil(q - 0.5));
  return std::clamp(i, 0, count - 1);
}

}  // namespace

std::string to_string(const NodeId& n) {
  return "(" + std::to_string(n.ix) + "," + std::to_string(n.iy) + ")";
}

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double heading_deg(Direction d) { return 90.0 * static_cast<int>(d); }

NodeId step_toward(const NodeId& n, Direction d) {
  switch (d) {
    case Direction::kEast: return {n.ix + 1, n.iy};
    case Direction::kNorth: return {n.ix, n.iy + 1};
    case Direction::kWest: return {n.ix - 1, n.iy};
    case Direction::kSouth: return {n.ix, n.iy - 1};
  }
  return n;
}

Direction direction_between(const NodeId& from, const NodeId& to) {
  for (Direction d : kAllDirections) {
    if (step_toward(from, d) == to) return d;
  }
  throw Error(ErrorCode::kInvalidArgument, to_string(from) + " and " + to_string(to) + " are not adjacent");
}

int quarter_turns(Direction from, Direction to) {
  const int diff = (static_cast<int>(to) - static_cast<int>(from) + 4) % 4;
  return diff == 3 ? 1 : diff;
}

int manhattan(const NodeId& a, const NodeId& b) { return std::abs(a.ix - b.ix) + std::abs(a.iy - b.iy); }

GridMap::GridMap(double width_m, double height_m, double spacing_m, int nx, int ny)
    : width_m_(width_m),
      height_m_(height_m),
      spacing_m_(spacing_m),
      nx_(nx),
      ny_(ny),
      blocked_(static_cast<std::size_t>(nx) * ny, 0) {}

GridMap GridMap::build(double width_m, double height_m, double spacing_m) {
  if (!(width_m > 0.0) || !(height_m > 0.0) || !(spacing_m > 0.0)) {
    throw Error(ErrorCode::kNonPositiveDimension, "terrain width, height and spacing must be > 0");
  }
  if (spacing_m > std::min(width_m, height_m)) {
    throw Error(ErrorCode::kSpacingTooLarge, "spacing exceeds the shorter terrain side");
  }
  const int nx = static_cast<int>(std::floor(width_m / spacing_m + kCountEpsilon)) + 1;
  const int ny = static_cast<int>(std::floor(height_m / spacing_m + kCountEpsilon)) + 1;
  return GridMap(width_m, height_m, spacing_m, nx, ny);
}

void GridMap::require(const NodeId& n) const {
  if (!contains(n)) {
    throw Error(ErrorCode::kNodeOutOfRange,
                "node " + to_string(n) + " outside " + std::to_string(nx_) + "x" + std::to_string(ny_) + " grid");
  }
}

bool GridMap::is_blocked(const NodeId& n) const {
  return contains(n) && blocked_[static_cast<std::size_t>(index_of(n))] != 0;
}

void GridMap::block(const NodeId& n) {
  require(n);
  blocked_[static_cast<std::size_t>(index_of(n))] = 1;
}

void GridMap::unblock(const NodeId& n) {
  require(n);
  blocked_[static_cast<std::size_t>(index_of(n))] = 0;
}

std::vector<NodeId> GridMap::blocked() const {
  std::vector<NodeId> out;
  for (int i = 0; i < node_count(); ++i) {
    if (blocked_[static_cast<std::size_t>(i)] != 0) out.push_back(node_at(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Position GridMap::node_to_position(const NodeId& n) const {
  require(n);
  return {n.ix * spacing_m_, n.iy * spacing_m_};
}

bool GridMap::in_terrain(const Position& p, double tolerance) const {
  return p.x >= -tolerance && p.y >= -tolerance && p.x <= width_m_ + tolerance && p.y <= height_m_ + tolerance;
}

NodeId GridMap::position_to_nearest_node(const Position& p) const {
  if (!in_terrain(p)) {
    throw Error(ErrorCode::kOutOfTerrain, "position outside terrain bounds");
  }
  // The lattice is separable, so the Euclidean nearest node is the per-axis nearest.
  return {snap_axis(p.x, spacing_m_, nx_), snap_axis(p.y, spacing_m_, ny_)};
}

NeighborList GridMap::neighbors(const NodeId& n) const {
  NeighborList out;
  for (Direction d : kAllDirections) {
    const NodeId m = step_toward(n, d);
    if (is_free(m)) out.push_back(m);
  }
  return out;
}

}  // namespace cargoswarm
