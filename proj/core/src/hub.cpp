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

#include "cargoswarm/hub.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <tuple>

#include <nlohmann/json.hpp>

#include "cargoswarm/error.hpp"

namespace cargoswarm {
namespace {

std::string fixed5(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  // "-0.00000" and "0.00000" must not differ between runs
  if (std::string_view(buf) == "-0.00000") return "0.00000";
  return buf;
}

}  // namespace

TelemetryRecord make_telemetry_record(Tick tick, VehicleId vehicle, const TelemetryPayload& t,
                                      const Position& origin, std::string_view state) {
  TelemetryRecord r;
  r.tick = tick;
  r.vehicle_id = vehicle;
  r.x_m = t.x_mm / 1000.0;
  r.y_m = t.y_mm / 1000.0;
  r.heading_deg = t.heading_cdeg / 100.0;
  r.speed_m_s = t.speed_mm_s / 1000.0;
  const double dx = r.x_m - origin.x;
  const double dy = r.y_m - origin.y;
  r.dist_from_origin_m = std::hypot(dx, dy);
  if (dx == 0.0 && dy == 0.0) {
    r.angle_from_origin_deg = 0.0;
  } else {
    double a = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
    if (a < 0) a += 360.0;
    if (a >= 360.0) a -= 360.0;
    r.angle_from_origin_deg = a;
  }
  r.state = std::string(state);
  return r;
}

Hub::Hub(GridMap grid, HubConfig config)
    : grid_(std::move(grid)), config_(config), distances_(floyd_warshall(grid_)) {}

void Hub::register_vehicle(VehicleId id, NodeId home, Direction heading) {
  (void)assign_channel(id);
  if (id < 0) throw Error(ErrorCode::kInvalidArgument, "vehicle id must be >= 0");
  if (members_.count(id)) throw Error(ErrorCode::kInvalidArgument, "duplicate vehicle " + std::to_string(id));
  if (!grid_.contains(home)) throw Error(ErrorCode::kNodeOutOfRange, "home " + to_string(home) + " off grid");
  if (grid_.is_blocked(home)) throw Error(ErrorCode::kInvalidArgument, "home " + to_string(home) + " is blocked");
  for (const auto& [other, m] : members_) {
    if (m.home == home) throw Error(ErrorCode::kInvalidArgument, "home " + to_string(home) + " already taken");
  }
  members_[id] = {home, heading};
  table_.reserve(id, home, 0, kForever);
}

void Hub::add_job(const Job& job) {
  for (const NodeId& n : {job.pickup_node, job.destination_node}) {
    if (!grid_.contains(n)) throw Error(ErrorCode::kNodeOutOfRange, "job node " + to_string(n) + " off grid");
    if (grid_.is_blocked(n)) throw Error(ErrorCode::kInvalidArgument, "job node " + to_string(n) + " is blocked");
  }
  if (job.pickup_node == job.destination_node)
    throw Error(ErrorCode::kInvalidArgument, "job " + std::to_string(job.job_id) + " has pickup == destination");
  if (job.release_tick < 0) throw Error(ErrorCode::kInvalidArgument, "negative release tick");
  if (!jobs_.emplace(job.job_id, job).second)
    throw Error(ErrorCode::kInvalidArgument, "duplicate job " + std::to_string(job.job_id));
  auto at = std::find_if(fleet_.queue.begin(), fleet_.queue.end(),
                         [&](const Job& q) { return q.job_id > job.job_id; });
  fleet_.queue.insert(at, job);
}

void Hub::send_assign(VehicleId vehicle, const Offer& offer, Tick now, Medium& medium) {
  medium.send(assign_channel(vehicle), encode(Message::assign_destination(vehicle, offer.job.destination_node)),
              now);
}

bool Hub::try_plan(VehicleId vehicle, Offer& offer, Tick now) {
  const Member& m = members_.at(vehicle);
  SpaceTimeOptions base;
  base.ticks_per_hop = config_.timing.hop_ticks;
  base.ticks_per_quarter_turn = config_.timing.quarter_turn_ticks;
  base.ticks_per_half_turn = config_.timing.half_turn_ticks;
  base.vehicle = vehicle;

  try {
    SpaceTimeOptions to_pickup = base;
    to_pickup.start_heading = m.heading;
    to_pickup.goal_hold_ticks = config_.load_dwell_ticks + 1;
    TimedPath pos = plan_space_time(grid_, table_, m.home, offer.job.pickup_node, now + 1, to_pickup);

    SpaceTimeOptions to_dest = base;
    to_dest.start_heading = pos.final_heading;
    to_dest.goal_hold_ticks = config_.unload_dwell_ticks + 1;
    TimedPath transit = plan_space_time(grid_, table_, offer.job.pickup_node, offer.job.destination_node,
                                        pos.goal_tick + config_.load_dwell_ticks, to_dest);

    std::vector<NodeId> route = pos.spatial().nodes;
    const std::vector<NodeId> leg = transit.spatial().nodes;
    route.insert(route.end(), leg.begin() + 1, leg.end());
    std::reverse(route.begin(), route.end());
    SpaceTimeOptions home = base;
    home.start_heading = transit.final_heading;
    home.goal_hold_ticks = kForever;
    TimedPath back = schedule_route(grid_, table_, route, transit.goal_tick + config_.unload_dwell_ticks, home);

    ReservationTable trial = table_;
    for (const TimedPath* p : {&pos, &transit, &back}) {
      if (!commit(trial, vehicle, *p).ok) throw Error(ErrorCode::kNoPath, "cycle conflicts with a reservation");
    }
    table_ = std::move(trial);
    plan_book_[vehicle] = Assignment{offer.job.job_id, offer.job.pickup_node, offer.job.destination_node,
                                     std::move(pos), std::move(transit), std::move(back)};
    offer.planned = true;
    return true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoPath) throw;
    ++stats_.plan_failures;
    offer.next_plan_try = now + config_.replan_ticks;
    return false;
  }
}

std::vector<std::pair<VehicleId, Job>> Hub::dispatch(Tick now, Medium& medium) {
  for (auto& [v, offer] : offers_) {
    if (!offer.acked) {
      if (now - offer.last_sent >= config_.retransmit_ticks) {
        send_assign(v, offer, now, medium);
        offer.last_sent = now;
        ++stats_.retransmissions;
      }
    } else if (!offer.planned && now >= offer.next_plan_try) {
      try_plan(v, offer, now);
    }
  }

  std::vector<std::pair<VehicleId, Job>> made;
  for (auto it = fleet_.queue.begin(); it != fleet_.queue.end();) {
    const Job job = *it;
    if (job.release_tick > now) {
      ++it;
      continue;
    }
    std::optional<VehicleId> best;
    int best_d = 0;
    for (const auto& [v, m] : members_) {
      if (offers_.count(v)) continue;
      const auto d = distances_.distance(m.home, job.pickup_node);
      if (!d) continue;
      if (!best || *d < best_d) {
        best = v;
        best_d = *d;
      }
    }
    if (!best) {
      ++it;
      continue;
    }
    Offer offer{job, now, now};
    send_assign(*best, offer, now, medium);
    ++stats_.assignments_sent;
    offers_[*best] = offer;
    fleet_.assignments[job.job_id] = *best;
    made.emplace_back(*best, job);
    it = fleet_.queue.erase(it);
  }
  return made;
}

void Hub::on_message(const Message& message, Tick now, std::string_view state_hint) {
  switch (message.kind) {
    case MessageKind::kAck: {
      auto it = offers_.find(message.vehicle_id);
      if (it == offers_.end() || it->second.acked) return;
      it->second.acked = true;
      try_plan(message.vehicle_id, it->second, now);
      return;
    }
    case MessageKind::kActivate:
      ++stats_.activations;
      return;
    case MessageKind::kTelemetry:
      ingest_telemetry(message, now, state_hint);
      return;
    case MessageKind::kAssignDestination:
      return;
  }
}

const FleetView& Hub::ingest_telemetry(const Message& message, Tick now, std::string_view state_hint) {
  if (message.kind != MessageKind::kTelemetry) throw Error(ErrorCode::kInvalidArgument, "not a telemetry message");
  if (!members_.count(message.vehicle_id))
    throw Error(ErrorCode::kUnknownVehicle, "telemetry from unregistered vehicle " +
                                                std::to_string(message.vehicle_id));
  TelemetryRecord r =
      make_telemetry_record(now, message.vehicle_id, message.telemetry_payload(), config_.origin, state_hint);
  fleet_.latest[r.vehicle_id] = r;
  log_.push_back(std::move(r));
  return fleet_;
}

std::optional<Assignment> Hub::take_plan(VehicleId vehicle) {
  auto it = plan_book_.find(vehicle);
  if (it == plan_book_.end()) return std::nullopt;
  Assignment a = std::move(it->second);
  plan_book_.erase(it);
  return a;
}

void Hub::complete_job(VehicleId vehicle, Tick now) {
  auto it = offers_.find(vehicle);
  if (it == offers_.end() || !it->second.planned)
    throw Error(ErrorCode::kInvalidArgument, "vehicle " + std::to_string(vehicle) + " has no running job");
  completions_.push_back({it->second.job.job_id, vehicle, it->second.assigned_tick, now});
  fleet_.assignments.erase(it->second.job.job_id);
  offers_.erase(it);
}

bool Hub::vehicle_idle(VehicleId vehicle) const {
  if (!members_.count(vehicle)) throw Error(ErrorCode::kUnknownVehicle, "vehicle " + std::to_string(vehicle));
  return !offers_.count(vehicle);
}

bool Hub::quiescent() const { return fleet_.queue.empty() && offers_.empty(); }

std::vector<std::optional<VehicleId>> associate_radar(const std::vector<TargetEstimate>& targets,
                                                      const FleetView& fleet, double gate_m) {
  std::vector<std::tuple<double, std::size_t, VehicleId>> pairs;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (const auto& [v, rec] : fleet.latest) {
      const double d = distance(targets[i].centroid, {rec.x_m, rec.y_m});
      if (d <= gate_m) pairs.emplace_back(d, i, v);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::optional<VehicleId>> out(targets.size());
  std::vector<VehicleId> used;
  for (const auto& [d, i, v] : pairs) {
    if (out[i] || std::find(used.begin(), used.end(), v) != used.end()) continue;
    out[i] = v;
    used.push_back(v);
  }
  return out;
}

std::string format_csv(const std::vector<TelemetryRecord>& log) {
  std::vector<const TelemetryRecord*> rows;
  rows.reserve(log.size());
  for (const auto& r : log) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const TelemetryRecord* a, const TelemetryRecord* b) {
    return std::tie(a->tick, a->vehicle_id) < std::tie(b->tick, b->vehicle_id);
  });
  std::string out =
      "tick,vehicle_id,x_m,y_m,heading_deg,speed_m_s,dist_from_origin_m,angle_from_origin_deg,state\n";
  for (const TelemetryRecord* r : rows) {
    out += std::to_string(r->tick) + ',' + std::to_string(r->vehicle_id) + ',' + fixed5(r->x_m) + ',' +
           fixed5(r->y_m) + ',' + fixed5(r->heading_deg) + ',' + fixed5(r->speed_m_s) + ',' +
           fixed5(r->dist_from_origin_m) + ',' + fixed5(r->angle_from_origin_deg) + ',' + r->state + '\n';
  }
  return out;
}

void write_csv(const std::vector<TelemetryRecord>& log, const std::filesystem::path& out) {
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot open " + out.string());
  f << format_csv(log);
  if (!f) throw Error(ErrorCode::kIoFailure, "write failed for " + out.string());
}

SummaryReport metrics(const std::vector<TelemetryRecord>& log, const std::vector<JobCompletion>& completions) {
  if (log.empty()) throw Error(ErrorCode::kEmptyLog, "no telemetry recorded");
  std::map<VehicleId, std::vector<const TelemetryRecord*>> by_vehicle;
  for (const auto& r : log) by_vehicle[r.vehicle_id].push_back(&r);

  SummaryReport rep;
  for (auto& [v, rows] : by_vehicle) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const TelemetryRecord* a, const TelemetryRecord* b) { return a->tick < b->tick; });
    VehicleMetrics m;
    m.vehicle_id = v;
    double speed_sum = 0.0;
    int transit_rows = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0) {
        m.total_distance_m += std::hypot(rows[i]->x_m - rows[i - 1]->x_m, rows[i]->y_m - rows[i - 1]->y_m);
        if (completions.empty() && rows[i - 1]->state == "RETRACING" && rows[i]->state == "IDLE")
          m.job_completion_ticks.push_back(rows[i]->tick);
      }
      if (rows[i]->state == "TRANSIT") {
        speed_sum += rows[i]->speed_m_s;
        ++transit_rows;
      }
    }
    if (transit_rows > 0) m.mean_transit_speed_m_s = speed_sum / transit_rows;
    rep.vehicles.push_back(std::move(m));
  }
  for (const auto& c : completions) {
    auto it = std::find_if(rep.vehicles.begin(), rep.vehicles.end(),
                           [&](const VehicleMetrics& m) { return m.vehicle_id == c.vehicle_id; });
    if (it == rep.vehicles.end()) {
      VehicleMetrics fresh;
      fresh.vehicle_id = c.vehicle_id;
      rep.vehicles.push_back(std::move(fresh));
      it = rep.vehicles.end() - 1;
    }
    it->job_completion_ticks.push_back(c.completed_tick);
  }
  std::sort(rep.vehicles.begin(), rep.vehicles.end(),
            [](const VehicleMetrics& a, const VehicleMetrics& b) { return a.vehicle_id < b.vehicle_id; });
  for (auto& m : rep.vehicles) {
    std::sort(m.job_completion_ticks.begin(), m.job_completion_ticks.end());
    rep.completed_jobs += m.job_completion_ticks.size();
    if (!m.job_completion_ticks.empty()) rep.makespan_ticks = std::max(rep.makespan_ticks, m.job_completion_ticks.back());
  }
  return rep;
}

std::string SummaryReport::to_text() const {
  std::string out = "completed_jobs " + std::to_string(completed_jobs) + "\n";
  out += "makespan_ticks " + std::to_string(makespan_ticks) + "\n";
  for (const auto& m : vehicles) {
    out += "vehicle " + std::to_string(m.vehicle_id) + " distance_m " + fixed5(m.total_distance_m) +
           " mean_transit_speed_m_s " + fixed5(m.mean_transit_speed_m_s) + " completions";
    if (m.job_completion_ticks.empty()) out += " -";
    for (Tick t : m.job_completion_ticks) out += " " + std::to_string(t);
    out += "\n";
  }
  return out;
}

std::string SummaryReport::to_json() const {
  nlohmann::ordered_json j;
  j["completed_jobs"] = completed_jobs;
  j["makespan_ticks"] = makespan_ticks;
  j["vehicles"] = nlohmann::ordered_json::array();
  for (const auto& m : vehicles) {
    nlohmann::ordered_json v;
    v["vehicle_id"] = m.vehicle_id;
    v["total_distance_m"] = std::round(m.total_distance_m * 1e5) / 1e5;
    v["mean_transit_speed_m_s"] = std::round(m.mean_transit_speed_m_s * 1e5) / 1e5;
    v["job_completion_ticks"] = m.job_completion_ticks;
    j["vehicles"].push_back(std::move(v));
  }
  return j.dump(2) + "\n";
}

}  // namespace cargoswarm
