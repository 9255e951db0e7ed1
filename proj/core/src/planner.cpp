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

#include "cargoswarm/planner.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

#include "cargoswarm/error.hpp"

namespace cargoswarm {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

void require_endpoint(const GridMap& grid, const NodeId& n, const char* role) {
  if (!grid.contains(n)) {
    throw Error(ErrorCode::kNodeOutOfRange, std::string(role) + " " + to_string(n) + " outside grid");
  }
  if (grid.is_blocked(n)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(role) + " " + to_string(n) + " is blocked");
  }
}

// Searches backward from dst so every node on a shortest route ends up with
// its exact distance to dst, then walks forward from src taking the first
// neighbor in E, N, W, S order that is one hop closer. Dijkstra is the
// zero-heuristic case; with a consistent heuristic the search keeps popping
// until f exceeds the optimum so ties are settled the same way.
template <typename Heuristic>
Path best_first(const GridMap& grid, NodeId src, NodeId dst, Heuristic heuristic) {
  require_endpoint(grid, src, "source");
  require_endpoint(grid, dst, "destination");

  const auto n = static_cast<std::size_t>(grid.node_count());
  std::vector<int> g(n, kInf);
  std::vector<bool> closed(n, false);

  // (f, h, node); lower h first on equal f, then NodeId.
  using Entry = std::tuple<int, int, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  const auto s = static_cast<std::size_t>(grid.index_of(src));
  const auto t = static_cast<std::size_t>(grid.index_of(dst));
  g[t] = 0;
  open.emplace(heuristic(dst), heuristic(dst), dst);
  int optimum = kInf;

  while (!open.empty()) {
    const auto [f, h, node] = open.top();
    if (f > optimum) break;
    open.pop();
    const auto u = static_cast<std::size_t>(grid.index_of(node));
    if (closed[u]) continue;
    closed[u] = true;
    if (u == s) optimum = g[u];

    const int gu = g[u];
    for (const NodeId& m : grid.neighbors(node)) {
      const auto v = static_cast<std::size_t>(grid.index_of(m));
      if (closed[v] || gu + 1 >= g[v]) continue;
      g[v] = gu + 1;
      const int hm = heuristic(m);
      open.emplace(gu + 1 + hm, hm, m);
    }
  }
  if (!closed[s]) throw Error(ErrorCode::kNoPath, "no route from " + to_string(src) + " to " + to_string(dst));

  Path path;
  path.nodes.push_back(src);
  for (NodeId at = src; at != dst;) {
    const int want = g[static_cast<std::size_t>(grid.index_of(at))] - 1;
    for (const NodeId& m : grid.neighbors(at)) {
      const auto v = static_cast<std::size_t>(grid.index_of(m));
      if (closed[v] && g[v] == want) {
        at = m;
        break;
      }
    }
    path.nodes.push_back(at);
  }
  path.cost = static_cast<int>(path.nodes.size()) - 1;
  return path;
}

}  // namespace

bool is_valid_path(const GridMap& grid, const Path& path) {
  if (path.nodes.empty()) return false;
  if (path.cost != static_cast<int>(path.nodes.size()) - 1) return false;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    if (!grid.is_free(path.nodes[i])) return false;
    if (i > 0 && manhattan(path.nodes[i - 1], path.nodes[i]) != 1) return false;
  }
  return true;
}

Path dijkstra(const GridMap& grid, NodeId src, NodeId dst) {
  return best_first(grid, src, dst, [](const NodeId&) { return 0; });
}

Path astar(const GridMap& grid, NodeId src, NodeId dst) {
  return best_first(grid, src, dst, [src](const NodeId& n) { return manhattan(n, src); });
}

CostMap bellman_ford(const GridMap& grid, NodeId src) {
  if (!grid.contains(src)) {
    throw Error(ErrorCode::kNodeOutOfRange, "source " + to_string(src) + " outside grid");
  }
  const int n = grid.node_count();
  std::vector<int> dist(static_cast<std::size_t>(n), kInf);
  dist[static_cast<std::size_t>(grid.index_of(src))] = 0;

  // Relax every directed edge up to |V|-1 times, stopping once stable.
  for (int round = 0; round < n - 1; ++round) {
    bool changed = false;
    for (int u = 0; u < n; ++u) {
      const int du = dist[static_cast<std::size_t>(u)];
      const NodeId node = grid.node_at(u);
      if (du == kInf || grid.is_blocked(node)) continue;
      for (const NodeId& m : grid.neighbors(node)) {
        auto& dv = dist[static_cast<std::size_t>(grid.index_of(m))];
        if (du + 1 < dv) {
          dv = du + 1;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  CostMap out;
  for (int u = 0; u < n; ++u) {
    if (dist[static_cast<std::size_t>(u)] != kInf) out.emplace(grid.node_at(u), dist[static_cast<std::size_t>(u)]);
  }
  return out;
}

AllPairs::AllPairs(const GridMap& grid)
    : nx_(grid.nx()), n_(grid.node_count()), d_(static_cast<std::size_t>(n_) * n_, kUnreachable) {}

std::optional<int> AllPairs::distance(const NodeId& a, const NodeId& b) const {
  if (a.ix < 0 || b.ix < 0 || a.ix >= nx_ || b.ix >= nx_) return std::nullopt;
  const int ia = a.iy * nx_ + a.ix;
  const int ib = b.iy * nx_ + b.ix;
  if (ia < 0 || ib < 0 || ia >= n_ || ib >= n_) return std::nullopt;
  const int v = at(ia, ib);
  if (v >= kUnreachable) return std::nullopt;
  return v;
}

AllPairs floyd_warshall(const GridMap& grid) {
  if (grid.node_count() > AllPairs::kMaxNodes) {
    throw Error(ErrorCode::kGridTooLarge, std::to_string(grid.node_count()) + " nodes exceeds the all-pairs limit of " +
                                              std::to_string(AllPairs::kMaxNodes));
  }
  AllPairs table(grid);
  const int n = table.n_;
  for (int u = 0; u < n; ++u) {
    const NodeId node = grid.node_at(u);
    if (grid.is_blocked(node)) continue;
    table.at(u, u) = 0;
    for (const NodeId& m : grid.neighbors(node)) table.at(u, grid.index_of(m)) = 1;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const int dik = table.at(i, k);
      if (dik >= AllPairs::kUnreachable) continue;
      for (int j = 0; j < n; ++j) {
        const int through = dik + table.at(k, j);
        if (through < table.at(i, j)) table.at(i, j) = through;
      }
    }
  }
  return table;
}

Path path_from_costs(const GridMap& grid, const CostMap& costs, NodeId src, NodeId dst) {
  auto it = costs.find(dst);
  if (it == costs.end()) {
    throw Error(ErrorCode::kNoPath, "no route from " + to_string(src) + " to " + to_string(dst));
  }
  Path path;
  path.nodes.push_back(dst);
  NodeId at = dst;
  int remaining = it->second;
  while (remaining > 0) {
    bool stepped = false;
    for (const NodeId& m : grid.neighbors(at)) {
      auto c = costs.find(m);
      if (c != costs.end() && c->second == remaining - 1) {
        at = m;
        --remaining;
        path.nodes.push_back(m);
        stepped = true;
        break;
      }
    }
    if (!stepped) throw Error(ErrorCode::kInvalidArgument, "cost field is not a shortest-path field");
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  path.cost = static_cast<int>(path.nodes.size()) - 1;
  return path;
}

}  // namespace cargoswarm
