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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "cargoswarm/planner.hpp"
#include "cargoswarm/reservation.hpp"
#include "expect_code.hpp"
#include "oracles.hpp"

using namespace cargoswarm;

namespace {

GridMap nine() { return GridMap::build(2.0, 2.0, 0.25); }

// Ticks during which a vehicle following `p` is on, or driving into or out
// of, each node: from the departure toward the node until the hop away from
// it lands. Derived from the departure ticks only.
std::map<NodeId, std::set<Tick>> physical_occupancy(const TimedPath& p, Tick horizon) {
  std::map<NodeId, std::set<Tick>> out;
  const Tick hop = p.ticks_per_hop;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const Tick from = i == 0 ? p.steps[0].enter_tick : p.steps[i - 1].depart_tick;
    const bool last = i + 1 == p.steps.size();
    const Tick to = last ? std::min(p.steps[i].exit_tick, horizon) : p.steps[i].depart_tick + hop;
    for (Tick t = from; t < to; ++t) out[p.steps[i].node].insert(t);
  }
  return out;
}

void expect_well_formed(const GridMap& g, const TimedPath& p, NodeId src, NodeId dst, Tick start) {
  ASSERT_FALSE(p.empty());
  EXPECT_EQ(p.origin(), src);
  EXPECT_EQ(p.destination(), dst);
  EXPECT_EQ(p.steps.front().enter_tick, start);
  EXPECT_TRUE(is_valid_path(g, p.spatial()));
  for (std::size_t i = 0; i + 1 < p.steps.size(); ++i) {
    const TimedStep& s = p.steps[i];
    EXPECT_EQ(s.exit_tick, s.depart_tick + p.ticks_per_hop);
    EXPECT_EQ(p.steps[i + 1].enter_tick, s.depart_tick);
    // cannot leave before arriving
    const Tick arrived = i == 0 ? start : p.steps[i - 1].depart_tick + p.ticks_per_hop;
    EXPECT_GE(s.depart_tick, arrived);
  }
  EXPECT_EQ(p.arrival_tick, p.steps.size() > 1 ? p.steps[p.steps.size() - 2].depart_tick + p.ticks_per_hop : start);
}

TEST(Reservation, OverlapConflictsAbutDoesNot) {
  ReservationTable t;
  EXPECT_TRUE(t.reserve(1, {0, 0}, 0, 10));
  const ReserveResult r = t.reserve(2, {0, 0}, 5, 15);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.conflict_with, 1);
  EXPECT_EQ(t.intervals({0, 0}).size(), 1u);
  EXPECT_TRUE(t.reserve(2, {0, 0}, 10, 20));
  EXPECT_TRUE(t.reserve(1, {0, 0}, 3, 7));  // same vehicle may overlap itself
  EXPECT_CODE(t.reserve(1, {0, 0}, 5, 5), ErrorCode::kBadInterval);
}

TEST(Reservation, GarbageCollectionAndRelease) {
  ReservationTable t;
  t.reserve(1, {0, 0}, 0, 10);
  t.reserve(2, {1, 0}, 5, kForever);
  t.reserve(1, {2, 0}, 20, 30);
  t.collect_garbage(10);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_TRUE(t.permanently_claimed({1, 0}, 100));
  EXPECT_FALSE(t.permanently_claimed({1, 0}, 100, 2));
  t.release(2);
  EXPECT_EQ(t.size(), 1u);
}

TEST(SpaceTime, EmptyTableMatchesAStar) {
  const GridMap g = nine();
  const ReservationTable t;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    const NodeId s = oracle::random_free_node(rng, g);
    const NodeId d = oracle::random_free_node(rng, g);
    const TimedPath p = plan_space_time(g, t, s, d, 0, 2);
    EXPECT_EQ(p.spatial(), astar(g, s, d));
    EXPECT_EQ(p.arrival_tick, 2 * astar(g, s, d).cost);
  }
}

TEST(SpaceTime, HeadOnSwapResolvedByWaiting) {
  // 3x2 lattice; vehicle 1 parked on (1,0) is the obstacle for vehicle 0
  const GridMap g = GridMap::build(0.5, 0.25, 0.25);
  ReservationTable t;
  SpaceTimeOptions a;
  a.ticks_per_hop = 2;
  a.vehicle = 0;
  a.goal_hold_ticks = 4;
  const TimedPath pa = plan_space_time(g, t, {0, 0}, {2, 0}, 0, a);
  ASSERT_TRUE(commit(t, 0, pa));

  SpaceTimeOptions b = a;
  b.vehicle = 1;
  const TimedPath pb = plan_space_time(g, t, {1, 1}, {0, 1}, 0, b);
  ASSERT_TRUE(commit(t, 1, pb));
  SpaceTimeOptions c = a;
  c.vehicle = 2;
  const TimedPath pc = plan_space_time(g, t, {2, 0}, {0, 0}, 0, c);
  ASSERT_TRUE(commit(t, 2, pc));
  expect_well_formed(g, pc, {2, 0}, {0, 0}, 0);

  const Tick horizon = 200;
  std::map<std::pair<NodeId, Tick>, int> seen;
  int id = 0;
  for (const TimedPath* p : {&pa, &pb, &pc}) {
    for (const auto& [node, ticks] : physical_occupancy(*p, horizon)) {
      for (Tick tk : ticks) {
        auto [it, fresh] = seen.emplace(std::make_pair(node, tk), id);
        EXPECT_TRUE(fresh) << "vehicles " << it->second << " and " << id << " share " << to_string(node)
                           << " at tick " << tk;
      }
    }
    ++id;
  }
  EXPECT_GT(pc.arrival_tick, 2 * 2);  // had to give way
}

TEST(SpaceTime, RefusesPermanentlyHeldDestination) {
  const GridMap g = nine();
  ReservationTable t;
  t.reserve(5, {3, 3}, 0, kForever);
  EXPECT_CODE(plan_space_time(g, t, {0, 0}, {3, 3}, 0, 1), ErrorCode::kNoPath);
}

TEST(SpaceTime, RefusesOccupiedSource) {
  const GridMap g = nine();
  ReservationTable t;
  t.reserve(5, {0, 0}, 0, 3);
  EXPECT_CODE(plan_space_time(g, t, {0, 0}, {3, 3}, 0, 1), ErrorCode::kNoPath);
}

TEST(SpaceTime, WaitsOutTemporaryBlock) {
  // corridor 5x1, middle node held for a while
  const GridMap g = GridMap::build(1.0, 0.0001 + 0.25, 0.25);
  ReservationTable t;
  t.reserve(9, {2, 0}, 0, 20);
  t.reserve(9, {2, 1}, 0, 20);
  const TimedPath p = plan_space_time(g, t, {0, 0}, {4, 0}, 0, 1);
  EXPECT_GE(p.arrival_tick, 20);
  EXPECT_TRUE(commit(t, 0, p));
}

TEST(SpaceTime, TurnsCostTime) {
  const GridMap g = nine();
  const ReservationTable t;
  SpaceTimeOptions o;
  o.ticks_per_hop = 10;
  o.ticks_per_quarter_turn = 4;
  o.start_heading = Direction::kEast;
  const TimedPath straight = plan_space_time(g, t, {0, 0}, {3, 0}, 0, o);
  EXPECT_EQ(straight.arrival_tick, 30);
  const TimedPath bend = plan_space_time(g, t, {0, 0}, {1, 1}, 0, o);
  EXPECT_EQ(bend.arrival_tick, 24);
  EXPECT_EQ(bend.final_heading, Direction::kNorth);
  o.start_heading = Direction::kWest;
  EXPECT_EQ(plan_space_time(g, t, {0, 0}, {2, 0}, 0, o).arrival_tick, 28);  // half turn = 2 quarters
}

TEST(SpaceTime, ScheduleRouteFollowsGivenNodes) {
  const GridMap g = nine();
  ReservationTable t;
  t.reserve(4, {1, 0}, 0, 6);
  const std::vector<NodeId> route{{0, 0}, {1, 0}, {1, 1}, {1, 2}};
  SpaceTimeOptions o;
  o.ticks_per_hop = 2;
  const TimedPath p = schedule_route(g, t, route, 0, o);
  EXPECT_EQ(p.spatial().nodes, route);
  EXPECT_GE(p.steps[0].depart_tick, 6);
  EXPECT_CODE(schedule_route(g, t, {{0, 0}, {2, 0}}, 0, o), ErrorCode::kInvalidArgument);
}

TEST(SpaceTime, CommitIsAllOrNothing) {
  const GridMap g = nine();
  ReservationTable t;
  const TimedPath p = plan_space_time(g, t, {0, 0}, {3, 0}, 0, 1);
  t.reserve(8, {3, 0}, 2, 4);
  const std::size_t before = t.size();
  const ReserveResult r = commit(t, 1, p);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.conflict_with, 8);
  EXPECT_EQ(t.size(), before);
}

// sequential cooperative planning never yields a conflicting commit and
// the claimed intervals cover the physical occupancy of every vehicle
TEST(SpaceTimeProperty, SequentialPlansAreSound) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const GridMap g = oracle::random_grid(rng, 0.2);
    ReservationTable t;
    std::vector<TimedPath> plans;
    std::set<NodeId> used;
    for (int v = 0; v < 4; ++v) {
      NodeId s = oracle::random_free_node(rng, g);
      NodeId d = oracle::random_free_node(rng, g);
      if (used.count(s) || used.count(d) || !oracle::bfs_hops(g, s, d)) continue;
      used.insert(s);
      used.insert(d);
      SpaceTimeOptions o;
      o.ticks_per_hop = 3;
      o.ticks_per_quarter_turn = 2;
      o.vehicle = v;
      o.goal_hold_ticks = 40;
      try {
        const TimedPath p = plan_space_time(g, t, s, d, 0, o);
        expect_well_formed(g, p, s, d, 0);
        ASSERT_TRUE(commit(t, v, p).ok);
        plans.push_back(p);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kNoPath);
      }
    }
    std::map<std::pair<NodeId, Tick>, std::size_t> seen;
    for (std::size_t i = 0; i < plans.size(); ++i) {
      for (const auto& [node, ticks] : physical_occupancy(plans[i], 2000)) {
        for (Tick tk : ticks) EXPECT_TRUE(seen.emplace(std::make_pair(node, tk), i).second);
      }
    }
  }
}

}  // namespace
