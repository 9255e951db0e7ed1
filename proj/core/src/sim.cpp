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

#include "cargoswarm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cargoswarm/error.hpp"
#include "cargoswarm/planner.hpp"

namespace cargoswarm {
namespace {

MotionTiming fleet_timing(const Scenario& s) {
  MotionTiming t;
  for (const auto& v : s.vehicles) {
    const MotionTiming m = measure_motion_timing(v.params, s.pid, s.terrain.spacing_m, s.sim.dt_s);
    t.hop_ticks = std::max(t.hop_ticks, m.hop_ticks);
    t.quarter_turn_ticks = std::max(t.quarter_turn_ticks, m.quarter_turn_ticks);
    t.half_turn_ticks = std::max(t.half_turn_ticks, m.half_turn_ticks);
  }
  return t;
}

HubConfig hub_config(const Scenario& s, const MotionTiming& timing) {
  HubConfig c;
  c.timing = timing;
  c.load_dwell_ticks = s.sim.load_dwell_ticks;
  c.unload_dwell_ticks = s.sim.unload_dwell_ticks;
  return c;
}

const Scenario& checked(const Scenario& s) {
  validate(s);
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

}  // namespace

Simulation::Simulation(Scenario scenario)
    : scenario_(checked(scenario)),
      grid_(build_grid(scenario_)),
      timing_(fleet_timing(scenario_)),
      hub_(grid_, hub_config(scenario_, timing_)),
      medium_(scenario_.medium) {
  std::vector<VehicleSpec> specs = scenario_.vehicles;
  std::sort(specs.begin(), specs.end(), [](const VehicleSpec& a, const VehicleSpec& b) { return a.id < b.id; });
  for (const auto& v : specs) {
    hub_.register_vehicle(v.id, v.home, v.heading);
    vehicles_.emplace_back(v.id, v.home, grid_, v.params, scenario_.pid, v.heading);
  }
  cycle_start_.assign(vehicles_.size(), 0);
  for (const auto& j : scenario_.jobs) hub_.add_job(j);
  if (scenario_.sim.capture_rf) medium_.enable_capture();

  const int n = std::max(1, static_cast<int>(std::lround(360.0 / scenario_.sensor.step_deg)));
  for (int i = 0; i < n; ++i) {
    const double a = i * scenario_.sensor.step_deg;
    if (a < 360.0) angles_.push_back(a);
  }
  current_sweep_.direction = direction_;
}

WorldModel Simulation::radar_world() const {
  WorldModel w;
  w.obstacles = scenario_.obstacles;
  for (const auto& v : vehicles_) w.obstacles.push_back({{v.pose().x, v.pose().y}, scenario_.sim.vehicle_radius_m});
  return w;
}

void Simulation::send(VehicleId vehicle, const Message& message) {
  medium_.send(assign_channel(vehicle), encode(message), now_);
}

void Simulation::deliver() {
  for (auto& v : vehicles_) {
    for (const WireFrame& f : medium_.poll(Radio(assign_channel(v.id())), now_)) {
      const Message m = decode(f.bytes);
      if (m.kind == MessageKind::kAssignDestination) {
        v.receive(m);
      } else {
        uplink_.push_back(m);
      }
    }
  }
}

void Simulation::advance_radar() {
  const std::size_t n = angles_.size();
  const std::size_t idx = direction_ > 0 ? angle_at_ : n - 1 - angle_at_;
  const double angle = angles_[idx];
  const auto echo = echo_distance(radar_world(), scenario_.sensor, angle);
  current_sweep_.samples.push_back({angle, echo});
  radar_stream_ += encode_frame(angle, echo);
  if (++angle_at_ == n) {
    last_targets_ = detect_targets(current_sweep_, scenario_.sensor);
    last_matches_ = associate_radar(last_targets_, hub_.fleet(), hub_.config().association_gate_m);
    last_sweep_ = std::move(current_sweep_);
    direction_ = -direction_;
    current_sweep_ = Scan{{}, direction_};
    angle_at_ = 0;
  }
}

void Simulation::tick() {
  deliver();

  for (const Message& m : uplink_) {
    auto it = std::find_if(vehicles_.begin(), vehicles_.end(), [&](const Vehicle& v) { return v.id() == m.vehicle_id; });
    const std::string_view hint = it == vehicles_.end() ? "" : to_string(it->state());
    hub_.on_message(m, now_, hint);
  }
  uplink_.clear();
  hub_.dispatch(now_, medium_);
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (auto plan = hub_.take_plan(vehicles_[i].id())) {
      vehicles_[i].start_assignment(std::move(*plan), memory_);
      cycle_start_[i] = now_;
    }
  }

  const double dt = scenario_.sim.dt_s;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    Vehicle& v = vehicles_[i];
    if (v.state() == VehicleState::kUnloading && v.assignment()) v.unload(memory_, &v.assignment()->retrace);
    const int job = v.assignment() ? v.assignment()->job_id : -1;
    v.step(grid_, dt, now_, memory_);
    switch (v.last_event()) {
      case VehicleEvent::kReachedPickup:
        v.press_load_switch();
        break;
      case VehicleEvent::kReturnedHome:
        cycles_.push_back({v.id(), job, v.home_node(), v.last_outbound(), v.retraced_nodes(), v.pose(),
                           cycle_start_[i], now_});
        hub_.complete_job(v.id(), now_);
        break;
      default:
        break;
    }
    for (const Message& m : v.take_outbox()) send(v.id(), m);
  }

  if (!angles_.empty()) {
    for (int k = 0; k < scenario_.sim.radar_steps_per_tick; ++k) advance_radar();
  }

  if (now_ % scenario_.sim.telemetry_interval == 0) {
    for (const auto& v : vehicles_) send(v.id(), Message::telemetry(v.id(), v.telemetry()));
  }

  hub_.collect_garbage(now_);

  const Tick every = scenario_.sim.frame_interval;
  if (every > 0 && now_ > 0 && now_ % every == 0) {
    const Scan& shown = last_sweep_ ? *last_sweep_ : current_sweep_;
    frames_.emplace_back(now_, render_svg(shown, {scenario_.terrain.width_m, scenario_.terrain.height_m},
                                          scenario_.sensor));
  }

  if (observer_) observer_(*this);
  ++now_;
}

bool Simulation::finished() const {
  if (!hub_.quiescent()) return false;
  return std::all_of(vehicles_.begin(), vehicles_.end(), [](const Vehicle& v) {
    return v.state() == VehicleState::kIdle && !v.positioning() && !v.has_assignment();
  });
}

SimReport Simulation::report() const {
  SimReport r;
  r.total_jobs = hub_.job_count();
  r.completed_jobs = hub_.completions().size();
  for (const auto& c : hub_.completions()) r.makespan_ticks = std::max(r.makespan_ticks, c.completed_tick);
  r.ticks_run = now_;
  r.all_complete = r.completed_jobs == r.total_jobs && finished();
  if (!hub_.log().empty()) r.summary = metrics(hub_.log(), hub_.completions());
  r.cycles = cycles_;
  r.hub = hub_.stats();
  r.frames_sent = medium_.sent();
  r.frames_dropped = medium_.dropped();
  return r;
}

SimReport Simulation::run(const std::filesystem::path& out_dir) {
  while (now_ < scenario_.sim.max_ticks && !finished()) tick();
  SimReport r = report();
  if (out_dir.empty()) return r;

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "frames", ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + (out_dir / "frames").string());

  const auto emit = [&](const std::filesystem::path& p, const std::string& text) {
    write_text(p, text);
    r.artifacts.push_back(p);
  };
  write_csv(hub_.log(), out_dir / "telemetry.csv");
  r.artifacts.push_back(out_dir / "telemetry.csv");
  emit(out_dir / "radar_frames.txt", radar_stream_);
  for (const auto& [t, svg] : frames_) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%08lld.svg", static_cast<long long>(t));
    emit(out_dir / "frames" / name, svg);
  }

  nlohmann::ordered_json j;
  j["total_jobs"] = r.total_jobs;
  j["completed_jobs"] = r.completed_jobs;
  j["all_complete"] = r.all_complete;
  j["makespan_ticks"] = r.makespan_ticks;
  j["ticks_run"] = r.ticks_run;
  j["dt_s"] = scenario_.sim.dt_s;
  j["timing"] = {{"hop_ticks", timing_.hop_ticks},
                 {"quarter_turn_ticks", timing_.quarter_turn_ticks},
                 {"half_turn_ticks", timing_.half_turn_ticks}};
  j["radio"] = {{"frames_sent", r.frames_sent},
                {"frames_dropped", r.frames_dropped},
                {"assignments_sent", r.hub.assignments_sent},
                {"retransmissions", r.hub.retransmissions},
                {"plan_failures", r.hub.plan_failures}};
  j["metrics"] = r.summary ? nlohmann::ordered_json::parse(r.summary->to_json()) : nlohmann::ordered_json();
  emit(out_dir / "summary.json", j.dump(2) + "\n");

  std::string text = "total_jobs " + std::to_string(r.total_jobs) + "\n";
  text += "ticks_run " + std::to_string(r.ticks_run) + "\n";
  text += "frames_sent " + std::to_string(r.frames_sent) + " dropped " + std::to_string(r.frames_dropped) + "\n";
  text += "retransmissions " + std::to_string(r.hub.retransmissions) + "\n";
  text += r.summary ? r.summary->to_text()
                    : "completed_jobs 0\nmakespan_ticks " + std::to_string(r.makespan_ticks) + "\n";
  emit(out_dir / "summary.txt", text);

  if (scenario_.sim.capture_rf) {
    medium_.write_capture(out_dir / "rf_capture.bin");
    r.artifacts.push_back(out_dir / "rf_capture.bin");
  }
  return r;
}

double estimate_cycle_ticks(const Scenario& s, const VehicleSpec& vehicle, const Job& job) {
  const GridMap grid = build_grid(s);
  const MotionTiming t = measure_motion_timing(vehicle.params, s.pid, s.terrain.spacing_m, s.sim.dt_s, 0.0);
  SpaceTimeOptions opts;
  opts.ticks_per_hop = t.hop_ticks;
  opts.ticks_per_quarter_turn = t.quarter_turn_ticks;
  opts.ticks_per_half_turn = t.half_turn_ticks;
  opts.start_heading = vehicle.heading;
  const ReservationTable empty;
  const TimedPath a = plan_space_time(grid, empty, vehicle.home, job.pickup_node, 0, opts);
  opts.start_heading = a.final_heading;
  const TimedPath b = plan_space_time(grid, empty, job.pickup_node, job.destination_node, 0, opts);

  std::vector<NodeId> route = a.spatial().nodes;
  const auto leg = b.spatial().nodes;
  route.insert(route.end(), leg.begin() + 1, leg.end());
  std::vector<NodeId> back(route.rbegin(), route.rend());
  route.insert(route.end(), back.begin() + 1, back.end());

  const VehicleParams& p = vehicle.params;
  const double lag_s = 1.0 / (p.motor_gain * s.pid.ki);
  double seconds = 0.0;
  std::optional<Direction> heading = vehicle.heading;
  for (std::size_t i = 1; i < route.size(); ++i) {
    const Direction d = direction_between(route[i - 1], route[i]);
    const int q = heading ? quarter_turns(*heading, d) : 0;
    if (q > 0) seconds += q * 90.0 / p.turn_rate_deg_s() + lag_s;
    seconds += s.terrain.spacing_m / p.cruise_speed_m_s + lag_s;
    heading = d;
  }
  return seconds / s.sim.dt_s + static_cast<double>(s.sim.load_dwell_ticks + s.sim.unload_dwell_ticks);
}

}  // namespace cargoswarm
