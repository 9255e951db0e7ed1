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

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "cargoswarm/grid.hpp"
#include "cargoswarm/planner.hpp"

namespace cargoswarm {

using VehicleId = int;
using Tick = std::int64_t;

inline constexpr VehicleId kNoVehicle = -1;
inline constexpr Tick kForever = std::numeric_limits<Tick>::max();

/// Half-open claim [start, end) on one node.
struct Reservation {
  Tick start = 0;
  Tick end = 0;
  VehicleId vehicle = kNoVehicle;

  bool overlaps(Tick s, Tick e) const { return start < e && s < end; }
};

struct ReserveResult {
  bool ok = true;
  VehicleId conflict_with = kNoVehicle;

  explicit operator bool() const { return ok; }
};

/// Fleet-wide space-time ledger. Intervals held by the same vehicle may
/// overlap; intervals of distinct vehicles on one node never do.
class ReservationTable {
 public:
  /// Throws kBadInterval unless start < end. On conflict the table is left
  /// unchanged and the first conflicting vehicle is reported.
  ReserveResult reserve(VehicleId vehicle, const NodeId& node, Tick start, Tick end);

  /// First vehicle other than `self` holding any tick of [start, end) on node.
  std::optional<VehicleId> first_conflict(const NodeId& node, Tick start, Tick end,
                                          VehicleId self = kNoVehicle) const;
  bool is_free(const NodeId& node, Tick start, Tick end, VehicleId self = kNoVehicle) const {
    return !first_conflict(node, start, end, self).has_value();
  }
  /// True when some other vehicle holds the node from `from` onward forever.
  bool permanently_claimed(const NodeId& node, Tick from, VehicleId self = kNoVehicle) const;

  void release(VehicleId vehicle);
  /// Drops every interval that ended at or before `now`.
  void collect_garbage(Tick now);

  const std::vector<Reservation>& intervals(const NodeId& node) const;
  const std::map<NodeId, std::vector<Reservation>>& entries() const { return entries_; }
  std::size_t size() const;

 private:
  std::map<NodeId, std::vector<Reservation>> entries_;
};

/// One node visit of a timed route. The vehicle claims the node over
/// [enter_tick, exit_tick) and starts the hop out of it at depart_tick; the
/// claim outlasts the departure by one hop so both ends of an edge are held
/// while the vehicle is on it. For the final step depart_tick == exit_tick.
struct TimedStep {
  NodeId node;
  Tick enter_tick = 0;
  Tick exit_tick = 0;
  Tick depart_tick = 0;

  bool operator==(const TimedStep&) const = default;
};

struct TimedPath {
  std::vector<TimedStep> steps;
  Tick ticks_per_hop = 1;
  /// Tick the vehicle physically reaches the final node.
  Tick arrival_tick = 0;
  /// Tick from which the final node is held for the requested dwell.
  Tick goal_tick = 0;
  std::optional<Direction> final_heading;

  bool empty() const { return steps.empty(); }
  NodeId origin() const { return steps.front().node; }
  NodeId destination() const { return steps.back().node; }
  /// Spatial projection with waits removed.
  Path spatial() const;

  bool operator==(const TimedPath&) const = default;
};

struct SpaceTimeOptions {
  Tick ticks_per_hop = 1;
  /// Rotation cost at a node; 0 disables heading tracking entirely.
  Tick ticks_per_quarter_turn = 0;
  /// Negative means twice the quarter turn.
  Tick ticks_per_half_turn = -1;
  Tick wait_ticks = 1;
  /// Heading at the start node; unset means the first rotation is free.
  std::optional<Direction> start_heading;
  /// How long the destination must stay free after arrival.
  Tick goal_hold_ticks = kForever;
  /// Reservations held by this vehicle are not obstacles.
  VehicleId vehicle = kNoVehicle;
  /// Search horizon past start_tick; 0 means ten grid diameters of hops.
  Tick horizon_ticks = 0;
};

/// Cooperative A* over (node, heading, tick) with a wait action. Returns the
/// earliest-arriving route that does not collide with any reservation in
/// `table`. Throws kNoPath when no route exists within the horizon.
TimedPath plan_space_time(const GridMap& grid, const ReservationTable& table, NodeId src, NodeId dst,
                          Tick start_tick, Tick ticks_per_hop);
TimedPath plan_space_time(const GridMap& grid, const ReservationTable& table, NodeId src, NodeId dst,
                          Tick start_tick, const SpaceTimeOptions& options);

/// Times a fixed spatial route (waits only, no detours) against the table.
TimedPath schedule_route(const GridMap& grid, const ReservationTable& table, const std::vector<NodeId>& route,
                         Tick start_tick, const SpaceTimeOptions& options);

/// Reserves every step of `path` for `vehicle`, all or nothing.
ReserveResult commit(ReservationTable& table, VehicleId vehicle, const TimedPath& path);

}  // namespace cargoswarm
