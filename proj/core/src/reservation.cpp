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

#include "cargoswarm/reservation.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <tuple>
#include <unordered_set>

#include "cargoswarm/error.hpp"

namespace cargoswarm {

// ---------------------------------------------------------------------------
// ReservationTable

ReserveResult ReservationTable::reserve(VehicleId vehicle, const NodeId& node, Tick start, Tick end) {
  if (!(start < end)) {
    throw Error(ErrorCode::kBadInterval,
                "empty interval [" + std::to_string(start) + ", " + std::to_string(end) + ") on " + to_string(node));
  }
  if (auto other = first_conflict(node, start, end, vehicle)) return {false, *other};
  entries_[node].push_back({start, end, vehicle});
  return {};
}

std::optional<VehicleId> ReservationTable::first_conflict(const NodeId& node, Tick start, Tick end,
                                                          VehicleId self) const {
  auto it = entries_.find(node);
  if (it == entries_.end()) return std::nullopt;
  for (const Reservation& r : it->second) {
    if (r.vehicle != self && r.overlaps(start, end)) return r.vehicle;
  }
  return std::nullopt;
}

bool ReservationTable::permanently_claimed(const NodeId& node, Tick from, VehicleId self) const {
  auto it = entries_.find(node);
  if (it == entries_.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(), [&](const Reservation& r) {
    return r.vehicle != self && r.end == kForever && r.start <= from;
  });
}

void ReservationTable::release(VehicleId vehicle) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    auto& v = it->second;
    v.erase(std::remove_if(v.begin(), v.end(), [vehicle](const Reservation& r) { return r.vehicle == vehicle; }),
            v.end());
    it = v.empty() ? entries_.erase(it) : std::next(it);
  }
}

void ReservationTable::collect_garbage(Tick now) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    auto& v = it->second;
    v.erase(std::remove_if(v.begin(), v.end(), [now](const Reservation& r) { return r.end <= now; }), v.end());
    it = v.empty() ? entries_.erase(it) : std::next(it);
  }
}

const std::vector<Reservation>& ReservationTable::intervals(const NodeId& node) const {
  static const std::vector<Reservation> kNone;
  auto it = entries_.find(node);
  return it == entries_.end() ? kNone : it->second;
}

std::size_t ReservationTable::size() const {
  std::size_t n = 0;
  for (const auto& [node, v] : entries_) n += v.size();
  return n;
}

// ---------------------------------------------------------------------------
// TimedPath

Path TimedPath::spatial() const {
  Path p;
  for (const TimedStep& s : steps) {
    if (p.nodes.empty() || p.nodes.back() != s.node) p.nodes.push_back(s.node);
  }
  p.cost = p.nodes.empty() ? 0 : static_cast<int>(p.nodes.size()) - 1;
  return p;
}

// ---------------------------------------------------------------------------
// Search

namespace {

constexpr int kAnyHeading = 4;

struct Successor {
  int key;
  NodeId node;
  Direction dir;
};

struct SearchState {
  int key;
  int heading;
  Tick t;
  int parent;
};

// Topology adapters: the free grid and a fixed route. `key` identifies a
// search position; for the grid it is the dense node index, for a route the
// position along it (routes may revisit nodes).
class GridTopology {
 public:
  // Exact static hop counts to dst serve as the heuristic, so with an empty
  // table the search walks the same route astar returns.
  GridTopology(const GridMap& grid, NodeId dst)
      : grid_(grid), dst_(dst), hops_(static_cast<std::size_t>(grid.node_count()), -1) {
    std::deque<NodeId> frontier{dst};
    hops_[static_cast<std::size_t>(grid.index_of(dst))] = 0;
    while (!frontier.empty()) {
      const NodeId at = frontier.front();
      frontier.pop_front();
      const int d = hops_[static_cast<std::size_t>(grid.index_of(at))];
      for (const NodeId& m : grid.neighbors(at)) {
        int& hm = hops_[static_cast<std::size_t>(grid.index_of(m))];
        if (hm < 0) {
          hm = d + 1;
          frontier.push_back(m);
        }
      }
    }
  }

  int start_key(const NodeId& src) const { return grid_.index_of(src); }
  NodeId node(int key) const { return grid_.node_at(key); }
  bool is_goal(int key) const { return key == grid_.index_of(dst_); }
  int hops_to_goal(int key) const {
    const int h = hops_[static_cast<std::size_t>(key)];
    return h < 0 ? manhattan(node(key), dst_) : h;
  }

  template <typename F>
  void for_each_successor(int key, F&& f) const {
    const NodeId at = node(key);
    for (Direction d : kAllDirections) {
      const NodeId m = step_toward(at, d);
      if (grid_.is_free(m)) f(Successor{grid_.index_of(m), m, d});
    }
  }

 private:
  const GridMap& grid_;
  NodeId dst_;
  std::vector<int> hops_;
};

class RouteTopology {
 public:
  explicit RouteTopology(const std::vector<NodeId>& route) : route_(route) {}

  int start_key(const NodeId&) const { return 0; }
  NodeId node(int key) const { return route_[static_cast<std::size_t>(key)]; }
  bool is_goal(int key) const { return key + 1 == static_cast<int>(route_.size()); }
  int hops_to_goal(int key) const { return static_cast<int>(route_.size()) - 1 - key; }

  template <typename F>
  void for_each_successor(int key, F&& f) const {
    if (is_goal(key)) return;
    const NodeId from = node(key);
    const NodeId to = node(key + 1);
    f(Successor{key + 1, to, direction_between(from, to)});
  }

 private:
  const std::vector<NodeId>& route_;
};

struct Timing {
  Tick hop;
  Tick quarter;
  Tick half;
  Tick wait;
  bool track_heading;

  Tick turn(int heading, Direction to) const {
    if (!track_heading || heading == kAnyHeading) return 0;
    switch (quarter_turns(static_cast<Direction>(heading), to)) {
      case 0: return 0;
      case 1: return quarter;
      default: return half;
    }
  }
};

Timing make_timing(const SpaceTimeOptions& o) {
  if (o.ticks_per_hop < 1) throw Error(ErrorCode::kInvalidArgument, "ticks_per_hop must be >= 1");
  if (o.wait_ticks < 1) throw Error(ErrorCode::kInvalidArgument, "wait_ticks must be >= 1");
  if (o.ticks_per_quarter_turn < 0) throw Error(ErrorCode::kInvalidArgument, "ticks_per_quarter_turn must be >= 0");
  const Tick half = o.ticks_per_half_turn < 0 ? 2 * o.ticks_per_quarter_turn : o.ticks_per_half_turn;
  const bool track = o.ticks_per_quarter_turn > 0 || half > 0;
  return {o.ticks_per_hop, o.ticks_per_quarter_turn, half, o.wait_ticks, track};
}

Tick hold_end(Tick from, Tick hold) { return hold == kForever || from > kForever - hold ? kForever : from + hold; }

std::uint64_t pack(int key, int heading, Tick offset) {
  return (static_cast<std::uint64_t>(offset) << 24) | (static_cast<std::uint64_t>(key) << 3) |
         static_cast<std::uint64_t>(heading);
}

template <typename Topology>
TimedPath search(const Topology& topo, const ReservationTable& table, NodeId src, Tick start,
                 const SpaceTimeOptions& opts, Tick horizon, const std::string& what) {
  const Timing timing = make_timing(opts);
  const VehicleId self = opts.vehicle;
  const Tick limit = start + horizon;

  if (!table.is_free(src, start, start + 1, self)) {
    throw Error(ErrorCode::kNoPath, what + ": source " + to_string(src) + " is occupied at tick " +
                                        std::to_string(start));
  }

  const int start_heading = timing.track_heading && opts.start_heading
                                ? static_cast<int>(*opts.start_heading)
                                : kAnyHeading;

  std::vector<SearchState> pool;
  std::unordered_set<std::uint64_t> seen;
  // (f, h, pool index); earlier generation wins ties.
  using Entry = std::tuple<Tick, Tick, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  auto push = [&](int key, int heading, Tick t, int parent) {
    if (!seen.insert(pack(key, heading, t - start)).second) return;
    const Tick h = static_cast<Tick>(topo.hops_to_goal(key)) * timing.hop;
    pool.push_back({key, heading, t, parent});
    open.emplace(t - start + h, h, static_cast<int>(pool.size()) - 1);
  };

  push(topo.start_key(src), start_heading, start, -1);

  int goal = -1;
  while (!open.empty()) {
    const int idx = std::get<2>(open.top());
    open.pop();
    const SearchState s = pool[static_cast<std::size_t>(idx)];
    const NodeId here = topo.node(s.key);

    if (topo.is_goal(s.key) && table.is_free(here, s.t, hold_end(s.t, opts.goal_hold_ticks), self)) {
      goal = idx;
      break;
    }

    topo.for_each_successor(s.key, [&](const Successor& next) {
      const Tick depart = s.t + timing.turn(s.heading, next.dir);
      const Tick arrive = depart + timing.hop;
      if (arrive > limit) return;
      if (!table.is_free(here, s.t, arrive, self)) return;
      if (!table.is_free(next.node, depart, arrive, self)) return;
      push(next.key, timing.track_heading ? static_cast<int>(next.dir) : kAnyHeading, arrive, idx);
    });

    const Tick resume = s.t + timing.wait;
    if (resume <= limit && table.is_free(here, s.t, resume, self)) push(s.key, s.heading, resume, idx);
  }

  if (goal < 0) {
    throw Error(ErrorCode::kNoPath, what + ": no conflict-free route within " + std::to_string(horizon) + " ticks");
  }

  std::vector<SearchState> chain;
  for (int at = goal; at >= 0; at = pool[static_cast<std::size_t>(at)].parent) {
    chain.push_back(pool[static_cast<std::size_t>(at)]);
  }
  std::reverse(chain.begin(), chain.end());

  TimedPath out;
  out.ticks_per_hop = timing.hop;
  out.steps.push_back({topo.node(chain.front().key), start, start, start});
  out.arrival_tick = start;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (chain[i].key == chain[i - 1].key) continue;  // wait
    const Tick arrive = chain[i].t;
    const Tick depart = arrive - timing.hop;
    TimedStep& prev = out.steps.back();
    prev.depart_tick = depart;
    prev.exit_tick = arrive;
    out.steps.push_back({topo.node(chain[i].key), depart, depart, depart});
    out.arrival_tick = arrive;
  }
  out.goal_tick = chain.back().t;
  TimedStep& last = out.steps.back();
  last.exit_tick = hold_end(out.goal_tick, opts.goal_hold_ticks);
  last.depart_tick = last.exit_tick;
  if (timing.track_heading && chain.back().heading != kAnyHeading) {
    out.final_heading = static_cast<Direction>(chain.back().heading);
  } else {
    out.final_heading = opts.start_heading;
  }
  return out;
}

Tick default_horizon(int hops, const SpaceTimeOptions& o) {
  const Timing t = make_timing(o);
  return 10 * static_cast<Tick>(std::max(hops, 1)) * (t.hop + t.quarter);
}

}  // namespace

TimedPath plan_space_time(const GridMap& grid, const ReservationTable& table, NodeId src, NodeId dst,
                          Tick start_tick, Tick ticks_per_hop) {
  SpaceTimeOptions options;
  options.ticks_per_hop = ticks_per_hop;
  return plan_space_time(grid, table, src, dst, start_tick, options);
}

TimedPath plan_space_time(const GridMap& grid, const ReservationTable& table, NodeId src, NodeId dst,
                          Tick start_tick, const SpaceTimeOptions& options) {
  for (const NodeId& n : {src, dst}) {
    if (!grid.contains(n)) throw Error(ErrorCode::kNodeOutOfRange, "node " + to_string(n) + " outside grid");
    if (grid.is_blocked(n)) throw Error(ErrorCode::kInvalidArgument, "node " + to_string(n) + " is blocked");
  }
  const std::string what = "plan " + to_string(src) + "->" + to_string(dst);

  // Cheap refusals before the time-expanded search: a destination somebody
  // parks on forever, or no spatial route once permanent claims are walls.
  if (options.goal_hold_ticks == kForever && table.permanently_claimed(dst, kForever - 1, options.vehicle)) {
    throw Error(ErrorCode::kNoPath, what + ": destination is permanently reserved");
  }
  GridMap walls = grid;
  for (const auto& [node, claims] : table.entries()) {
    if (node != src && grid.contains(node) && table.permanently_claimed(node, start_tick, options.vehicle)) {
      walls.block(node);
    }
  }
  if (walls.is_blocked(dst)) throw Error(ErrorCode::kNoPath, what + ": destination is permanently reserved");
  Path spatial;
  try {
    spatial = astar(walls, src, dst);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNoPath) throw Error(ErrorCode::kNoPath, what + ": spatially unreachable");
    throw;
  }

  const Tick horizon = options.horizon_ticks > 0 ? options.horizon_ticks
                                                 : default_horizon(std::max(grid.diameter_hops(), spatial.cost), options);
  return search(GridTopology(walls, dst), table, src, start_tick, options, horizon, what);
}

TimedPath schedule_route(const GridMap& grid, const ReservationTable& table, const std::vector<NodeId>& route,
                         Tick start_tick, const SpaceTimeOptions& options) {
  if (route.empty()) throw Error(ErrorCode::kInvalidArgument, "empty route");
  Path as_path{route, static_cast<int>(route.size()) - 1};
  if (!is_valid_path(grid, as_path)) throw Error(ErrorCode::kInvalidArgument, "route is not a valid grid path");
  const std::string what = "schedule " + to_string(route.front()) + "->" + to_string(route.back());
  const Tick horizon = options.horizon_ticks > 0
                           ? options.horizon_ticks
                           : default_horizon(std::max(grid.diameter_hops(), as_path.cost), options);
  return search(RouteTopology(route), table, route.front(), start_tick, options, horizon, what);
}

ReserveResult commit(ReservationTable& table, VehicleId vehicle, const TimedPath& path) {
  for (const TimedStep& s : path.steps) {
    if (s.enter_tick >= s.exit_tick) continue;
    if (auto other = table.first_conflict(s.node, s.enter_tick, s.exit_tick, vehicle)) return {false, *other};
  }
  for (const TimedStep& s : path.steps) {
    if (s.enter_tick < s.exit_tick) table.reserve(vehicle, s.node, s.enter_tick, s.exit_tick);
  }
  return {};
}

}  // namespace cargoswarm
