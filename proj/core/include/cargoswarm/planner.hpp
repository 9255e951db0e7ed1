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

#include <map>
#include <optional>
#include <vector>

#include "cargoswarm/grid.hpp"

namespace cargoswarm {

/// Spatial route; cost is the hop count.
struct Path {
  std::vector<NodeId> nodes;
  int cost = 0;

  bool operator==(const Path&) const = default;
};

/// True when consecutive nodes are 4-adjacent, nothing is blocked or out of
/// range, and cost matches the hop count.
bool is_valid_path(const GridMap& grid, const Path& path);

// Shortest paths on unit-weight edges. Both searches expand neighbors in
// East, North, West, South order and break queue ties on NodeId, so the
// returned path is a pure function of the grid and the endpoints.
// Throw kNodeOutOfRange / kInvalidArgument on bad endpoints, kNoPath when
// the destination is unreachable.
Path dijkstra(const GridMap& grid, NodeId src, NodeId dst);
Path astar(const GridMap& grid, NodeId src, NodeId dst);

/// Single-source hop distances; unreachable nodes are absent.
using CostMap = std::map<NodeId, int>;
CostMap bellman_ford(const GridMap& grid, NodeId src);

/// Dense all-pairs hop table from Floyd-Warshall.
class AllPairs {
 public:
  static constexpr int kMaxNodes = 1000;

  explicit AllPairs(const GridMap& grid);

  std::optional<int> distance(const NodeId& a, const NodeId& b) const;
  int node_count() const { return n_; }

 private:
  friend AllPairs floyd_warshall(const GridMap& grid);

  static constexpr int kUnreachable = 1 << 29;

  int& at(int a, int b) { return d_[static_cast<std::size_t>(a) * n_ + b]; }
  int at(int a, int b) const { return d_[static_cast<std::size_t>(a) * n_ + b]; }

  int nx_;
  int n_;
  std::vector<int> d_;
};

/// Throws kGridTooLarge beyond AllPairs::kMaxNodes nodes.
AllPairs floyd_warshall(const GridMap& grid);

/// Recovers a path from a distance field by walking from dst back to a
/// neighbor one hop closer, preferring E, N, W, S. Used to print routes for
/// the distance-only algorithms. Throws kNoPath if dst has no distance.
Path path_from_costs(const GridMap& grid, const CostMap& costs, NodeId src, NodeId dst);

}  // namespace cargoswarm
