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

// Independent reference implementations used as test oracles. Nothing here
// calls into the library code under test except for plain data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <vector>

#include "cargoswarm/grid.hpp"

namespace oracle {

using cargoswarm::GridMap;
using cargoswarm::NodeId;

// Plain breadth-first search over the 4-lattice, written from scratch.
inline std::optional<int> bfs_hops(const GridMap& g, NodeId src, NodeId dst) {
  if (!g.is_free(src) || !g.is_free(dst)) return std::nullopt;
  std::vector<int> dist(static_cast<std::size_t>(g.nx() * g.ny()), -1);
  auto idx = [&](NodeId n) { return static_cast<std::size_t>(n.iy * g.nx() + n.ix); };
  std::queue<NodeId> q;
  dist[idx(src)] = 0;
  q.push(src);
  const int dx[] = {1, 0, -1, 0};
  const int dy[] = {0, 1, 0, -1};
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    if (u == dst) return dist[idx(u)];
    for (int k = 0; k < 4; ++k) {
      const NodeId v{u.ix + dx[k], u.iy + dy[k]};
      if (v.ix < 0 || v.iy < 0 || v.ix >= g.nx() || v.iy >= g.ny()) continue;
      if (g.is_blocked(v) || dist[idx(v)] >= 0) continue;
      dist[idx(v)] = dist[idx(u)] + 1;
      q.push(v);
    }
  }
  return std::nullopt;
}

// 9x9 lattice on 2x2 m with a random fraction of blocked nodes in [0, max_fraction].
inline GridMap random_grid(std::mt19937_64& rng, double max_fraction = 0.3) {
  GridMap g = GridMap::build(2.0, 2.0, 0.25);
  std::uniform_real_distribution<double> frac(0.0, max_fraction);
  const int total = g.node_count();
  const int blocked = static_cast<int>(std::floor(frac(rng) * total));
  std::vector<int> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < blocked; ++i) g.block(g.node_at(order[static_cast<std::size_t>(i)]));
  return g;
}

inline NodeId random_free_node(std::mt19937_64& rng, const GridMap& g) {
  std::uniform_int_distribution<int> ix(0, g.nx() - 1);
  std::uniform_int_distribution<int> iy(0, g.ny() - 1);
  for (;;) {
    const NodeId n{ix(rng), iy(rng)};
    if (!g.is_blocked(n)) return n;
  }
}

// Bit-at-a-time CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection.
inline std::uint16_t crc16_bitwise(std::span<const std::uint8_t> data) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : data) {
    crc ^= static_cast<std::uint16_t>(byte) << 8;
    for (int b = 0; b < 8; ++b) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021) : static_cast<std::uint16_t>(crc << 1);
    }
  }
  return crc;
}

// Minimum-sum assignment of rows to columns by exhaustive search; cost
// entries above `gate` are forbidden. Returns the column per row or -1.
inline std::vector<int> brute_force_matching(const std::vector<std::vector<double>>& cost, double gate) {
  const std::size_t rows = cost.size();
  const std::size_t cols = rows ? cost[0].size() : 0;
  std::vector<int> best(rows, -1);
  double best_sum = std::numeric_limits<double>::infinity();
  std::size_t best_count = 0;
  std::vector<int> cur(rows, -1);
  std::vector<bool> used(cols, false);
  auto rec = [&](auto&& self, std::size_t r, std::size_t count, double sum) -> void {
    if (r == rows) {
      if (count > best_count || (count == best_count && sum < best_sum)) {
        best_count = count;
        best_sum = sum;
        best = cur;
      }
      return;
    }
    cur[r] = -1;
    self(self, r + 1, count, sum);
    for (std::size_t c = 0; c < cols; ++c) {
      if (used[c] || cost[r][c] > gate) continue;
      used[c] = true;
      cur[r] = static_cast<int>(c);
      self(self, r + 1, count + 1, sum + cost[r][c]);
      used[c] = false;
      cur[r] = -1;
    }
  };
  rec(rec, 0, 0, 0.0);
  return best;
}

// Ray from `o` at angle `deg` against a disc; distance to the first hit.
inline std::optional<double> ray_disc(double ox, double oy, double deg, double cx, double cy, double r) {
  const double th = deg * M_PI / 180.0;
  const double ux = std::cos(th);
  const double uy = std::sin(th);
  const double fx = ox - cx;
  const double fy = oy - cy;
  const double b = fx * ux + fy * uy;
  const double c = fx * fx + fy * fy - r * r;
  const double disc = b * b - c;
  if (disc < 0) return std::nullopt;
  const double t = -b - std::sqrt(disc);
  if (t < 0) return std::nullopt;
  return t;
}

}  // namespace oracle
