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

#include <benchmark/benchmark.h>

#include "cargoswarm/planner.hpp"
#include "cargoswarm/reservation.hpp"

using namespace cargoswarm;

namespace {

GridMap field(double side) {
  GridMap g = GridMap::build(side, side, 0.25);
  // a comb of walls with gaps at alternating ends
  for (int ix = 2; ix < g.nx() - 1; ix += 3)
    for (int iy = 0; iy < g.ny() - 1; ++iy) g.block({ix, (ix / 3) % 2 ? iy + 1 : iy});
  return g;
}

void BM_Dijkstra(benchmark::State& state) {
  const GridMap g = field(static_cast<double>(state.range(0)));
  const NodeId far{g.nx() - 1, g.ny() - 1};
  for (auto _ : state) benchmark::DoNotOptimize(dijkstra(g, {0, 0}, far));
}
BENCHMARK(BM_Dijkstra)->Arg(2)->Arg(5)->Arg(7);

void BM_AStar(benchmark::State& state) {
  const GridMap g = field(static_cast<double>(state.range(0)));
  const NodeId far{g.nx() - 1, g.ny() - 1};
  for (auto _ : state) benchmark::DoNotOptimize(astar(g, {0, 0}, far));
}
BENCHMARK(BM_AStar)->Arg(2)->Arg(5)->Arg(7);

void BM_BellmanFord(benchmark::State& state) {
  const GridMap g = field(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bellman_ford(g, {0, 0}));
}
BENCHMARK(BM_BellmanFord)->Arg(2)->Arg(5);

void BM_FloydWarshall(benchmark::State& state) {
  const GridMap g = field(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(floyd_warshall(g));
}
BENCHMARK(BM_FloydWarshall)->Arg(2)->Arg(5);

void BM_SpaceTimeBusyTable(benchmark::State& state) {
  const GridMap g = GridMap::build(2.0, 2.0, 0.25);
  ReservationTable table;
  // other vehicles sweeping the middle row
  for (int v = 1; v <= 4; ++v)
    for (int ix = 0; ix < 9; ++ix) table.reserve(v, {ix, 4}, v * 40 + ix * 10, v * 40 + ix * 10 + 12);
  SpaceTimeOptions o;
  o.ticks_per_hop = 10;
  o.ticks_per_quarter_turn = 12;
  o.goal_hold_ticks = 20;
  for (auto _ : state) benchmark::DoNotOptimize(plan_space_time(g, table, {4, 0}, {4, 8}, 0, o));
}
BENCHMARK(BM_SpaceTimeBusyTable);

}  // namespace
