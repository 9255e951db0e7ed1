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

#include "cargoswarm/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cargoswarm/error.hpp"
#include "cargoswarm/planner.hpp"

namespace cargoswarm {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string_view heading_name(Direction d) {
  switch (d) {
    case Direction::kEast: return "E";
    case Direction::kNorth: return "N";
    case Direction::kWest: return "W";
    case Direction::kSouth: return "S";
  }
  return "E";
}

// Collects "path: reason" diagnostics instead of stopping at the first one.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& diags) : diags_(diags) {}

  void fail(const std::string& path, const std::string& why) { diags_.push_back(path + ": " + why); }

  bool object(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(join(path, k), "unknown field");
    }
    return true;
  }

  void number(const json& j, const std::string& path, const char* key, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) return fail(join(path, key), "expected a number");
    out = v.get<double>();
  }

  template <typename Int>
  void integer(const json& j, const std::string& path, const char* key, Int& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer()) return fail(join(path, key), "expected an integer");
    out = v.get<Int>();
  }

  void boolean(const json& j, const std::string& path, const char* key, bool& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_boolean()) return fail(join(path, key), "expected true or false");
    out = v.get<bool>();
  }

  bool node(const json& v, const std::string& path, NodeId& out) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
      fail(path, "expected [ix, iy]");
      return false;
    }
    out = {v[0].get<int>(), v[1].get<int>()};
    return true;
  }

  void node(const json& j, const std::string& path, const char* key, NodeId& out, bool required) {
    if (!j.contains(key)) {
      if (required) fail(join(path, key), "missing");
      return;
    }
    node(j.at(key), join(path, key), out);
  }

  void position(const json& j, const std::string& path, const char* key, Position& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      return fail(join(path, key), "expected [x, y]");
    out = {v[0].get<double>(), v[1].get<double>()};
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }
  static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

 private:
  std::vector<std::string>& diags_;
};

void read_params(Reader& r, const json& j, const std::string& path, VehicleParams& p) {
  if (!r.object(j, path, {"wheelbase_m", "track_m", "wheel_radius_m", "cruise_speed_m_s", "motor_gain",
                          "motor_time_constant_s"}))
    return;
  r.number(j, path, "wheelbase_m", p.wheelbase_m);
  r.number(j, path, "track_m", p.track_m);
  r.number(j, path, "wheel_radius_m", p.wheel_radius_m);
  r.number(j, path, "cruise_speed_m_s", p.cruise_speed_m_s);
  r.number(j, path, "motor_gain", p.motor_gain);
  r.number(j, path, "motor_time_constant_s", p.motor_time_constant_s);
}

Scenario read(const json& root, std::vector<std::string>& diags) {
  Reader r(diags);
  Scenario s;
  if (!r.object(root, "scenario",
                {"terrain", "sensor", "obstacles", "vehicles", "jobs", "medium", "sim", "pid"}))
    return s;

  if (root.contains("terrain")) {
    const json& t = root["terrain"];
    if (r.object(t, "terrain", {"width_m", "height_m", "spacing_m", "blocked"})) {
      r.number(t, "terrain", "width_m", s.terrain.width_m);
      r.number(t, "terrain", "height_m", s.terrain.height_m);
      r.number(t, "terrain", "spacing_m", s.terrain.spacing_m);
      if (t.contains("blocked")) {
        if (!t["blocked"].is_array()) {
          r.fail("terrain.blocked", "expected an array");
        } else {
          for (std::size_t i = 0; i < t["blocked"].size(); ++i) {
            NodeId n;
            if (r.node(t["blocked"][i], Reader::index("terrain.blocked", i), n)) s.terrain.blocked.push_back(n);
          }
        }
      }
    }
  }

  if (root.contains("sensor")) {
    const json& j = root["sensor"];
    if (r.object(j, "sensor", {"origin", "step_deg", "beam_halfwidth_deg", "max_range_m", "speed_of_sound_m_s"})) {
      r.position(j, "sensor", "origin", s.sensor.origin);
      r.number(j, "sensor", "step_deg", s.sensor.step_deg);
      r.number(j, "sensor", "beam_halfwidth_deg", s.sensor.beam_halfwidth_deg);
      r.number(j, "sensor", "max_range_m", s.sensor.max_range_m);
      r.number(j, "sensor", "speed_of_sound_m_s", s.sensor.speed_of_sound_m_s);
    }
  }

  if (root.contains("obstacles")) {
    const json& arr = root["obstacles"];
    if (!arr.is_array()) {
      r.fail("obstacles", "expected an array");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = Reader::index("obstacles", i);
        Disc d;
        if (!r.object(arr[i], path, {"center", "radius_m"})) continue;
        if (!arr[i].contains("center")) r.fail(path + ".center", "missing");
        r.position(arr[i], path, "center", d.center);
        r.number(arr[i], path, "radius_m", d.radius_m);
        s.obstacles.push_back(d);
      }
    }
  }

  if (root.contains("vehicles")) {
    const json& arr = root["vehicles"];
    if (!arr.is_array()) {
      r.fail("vehicles", "expected an array");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = Reader::index("vehicles", i);
        VehicleSpec v;
        v.id = static_cast<VehicleId>(i);
        if (!r.object(arr[i], path, {"id", "home", "heading", "params"})) continue;
        r.integer(arr[i], path, "id", v.id);
        r.node(arr[i], path, "home", v.home, true);
        if (arr[i].contains("heading")) {
          const json& h = arr[i]["heading"];
          const std::string name = h.is_string() ? h.get<std::string>() : "";
          if (name == "E") v.heading = Direction::kEast;
          else if (name == "N") v.heading = Direction::kNorth;
          else if (name == "W") v.heading = Direction::kWest;
          else if (name == "S") v.heading = Direction::kSouth;
          else r.fail(path + ".heading", "expected one of E, N, W, S");
        }
        if (arr[i].contains("params")) read_params(r, arr[i]["params"], path + ".params", v.params);
        s.vehicles.push_back(v);
      }
    }
  }

  if (root.contains("jobs")) {
    const json& arr = root["jobs"];
    if (!arr.is_array()) {
      r.fail("jobs", "expected an array");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = Reader::index("jobs", i);
        Job job;
        job.job_id = static_cast<int>(i);
        if (!r.object(arr[i], path, {"id", "pickup", "destination", "release_tick"})) continue;
        r.integer(arr[i], path, "id", job.job_id);
        r.node(arr[i], path, "pickup", job.pickup_node, true);
        r.node(arr[i], path, "destination", job.destination_node, true);
        r.integer(arr[i], path, "release_tick", job.release_tick);
        s.jobs.push_back(job);
      }
    }
  }

  if (root.contains("medium")) {
    const json& j = root["medium"];
    if (r.object(j, "medium", {"loss", "latency_ticks", "seed"})) {
      r.number(j, "medium", "loss", s.medium.loss_probability);
      r.integer(j, "medium", "latency_ticks", s.medium.latency_ticks);
      if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) r.fail("medium.seed", "expected a non-negative integer");
        else s.medium.seed = j["seed"].get<std::uint64_t>();
      }
    }
  }

  if (root.contains("sim")) {
    const json& j = root["sim"];
    if (r.object(j, "sim", {"dt_s", "max_ticks", "telemetry_interval", "radar_steps_per_tick", "frame_interval",
                            "load_dwell_ticks", "unload_dwell_ticks", "vehicle_radius_m", "capture_rf"})) {
      r.number(j, "sim", "dt_s", s.sim.dt_s);
      r.integer(j, "sim", "max_ticks", s.sim.max_ticks);
      r.integer(j, "sim", "telemetry_interval", s.sim.telemetry_interval);
      r.integer(j, "sim", "radar_steps_per_tick", s.sim.radar_steps_per_tick);
      r.integer(j, "sim", "frame_interval", s.sim.frame_interval);
      r.integer(j, "sim", "load_dwell_ticks", s.sim.load_dwell_ticks);
      r.integer(j, "sim", "unload_dwell_ticks", s.sim.unload_dwell_ticks);
      r.number(j, "sim", "vehicle_radius_m", s.sim.vehicle_radius_m);
      r.boolean(j, "sim", "capture_rf", s.sim.capture_rf);
    }
  }

  if (root.contains("pid")) {
    const json& j = root["pid"];
    if (r.object(j, "pid", {"kp", "ki", "kd", "output_limit"})) {
      r.number(j, "pid", "kp", s.pid.kp);
      r.number(j, "pid", "ki", s.pid.ki);
      r.number(j, "pid", "kd", s.pid.kd);
      r.number(j, "pid", "output_limit", s.pid.output_limit);
    }
  }
  return s;
}

[[noreturn]] void raise(const std::vector<std::string>& diags) {
  std::string msg;
  for (const auto& d : diags) msg += (msg.empty() ? "" : "; ") + d;
  throw Error(ErrorCode::kScenarioInvalid, msg);
}

std::string what_of(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    std::string m = err->what();
    const auto colon = m.find(": ");
    return colon == std::string::npos ? m : m.substr(colon + 2);
  }
  return e.what();
}

}  // namespace

Scenario default_scenario() {
  Scenario s;
  s.terrain.blocked = {{4, 4}};  // sensor mast
  s.vehicles = {{0, {0, 0}, Direction::kNorth, {}}, {1, {8, 0}, Direction::kNorth, {}}};
  s.jobs = {{0, {1, 2}, {1, 7}, 0}, {1, {7, 2}, {7, 7}, 0}};
  s.medium = {0.0, 1, 42};
  return s;
}

GridMap build_grid(const Scenario& scenario) {
  GridMap g = GridMap::build(scenario.terrain.width_m, scenario.terrain.height_m, scenario.terrain.spacing_m);
  for (const NodeId& n : scenario.terrain.blocked) g.block(n);
  return g;
}

void validate(const Scenario& s) {
  std::vector<std::string> diags;
  const auto fail = [&](const std::string& path, const std::string& why) { diags.push_back(path + ": " + why); };

  std::optional<GridMap> grid;
  try {
    GridMap g = GridMap::build(s.terrain.width_m, s.terrain.height_m, s.terrain.spacing_m);
    if (g.node_count() > AllPairs::kMaxNodes) {
      fail("terrain", std::to_string(g.node_count()) + " nodes exceeds " + std::to_string(AllPairs::kMaxNodes));
    } else {
      grid = std::move(g);
    }
  } catch (const std::exception& e) {
    fail("terrain", what_of(e));
  }
  if (grid) {
    for (std::size_t i = 0; i < s.terrain.blocked.size(); ++i) {
      if (!grid->contains(s.terrain.blocked[i])) fail(Reader::index("terrain.blocked", i), "outside the grid");
      else grid->block(s.terrain.blocked[i]);
    }
  }

  try {
    s.sensor.validate();
  } catch (const std::exception& e) {
    fail("sensor", what_of(e));
  }
  for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
    if (!(s.obstacles[i].radius_m > 0)) fail(Reader::index("obstacles", i) + ".radius_m", "must be positive");
  }

  if (s.vehicles.size() > kMaxVehicles) {
    fail("vehicles", std::to_string(s.vehicles.size()) + " vehicles exceeds the " + std::to_string(kMaxVehicles) +
                         " channel limit");
  }
  std::set<VehicleId> ids;
  std::set<NodeId> homes;
  for (std::size_t i = 0; i < s.vehicles.size(); ++i) {
    const VehicleSpec& v = s.vehicles[i];
    const std::string path = Reader::index("vehicles", i);
    if (v.id < 0 || v.id >= static_cast<VehicleId>(kMaxVehicles))
      fail(path + ".id", "must be in [0, " + std::to_string(kMaxVehicles) + ")");
    if (!ids.insert(v.id).second) fail(path + ".id", "duplicate id " + std::to_string(v.id));
    if (grid) {
      if (!grid->contains(v.home)) fail(path + ".home", to_string(v.home) + " outside the grid");
      else if (grid->is_blocked(v.home)) fail(path + ".home", to_string(v.home) + " is blocked");
    }
    if (!homes.insert(v.home).second) fail(path + ".home", "shared with another vehicle");
    try {
      v.params.validate();
      if (s.sim.dt_s > v.params.motor_time_constant_s / 2.0)
        fail("sim.dt_s", "exceeds half the motor time constant of vehicle " + std::to_string(v.id));
    } catch (const std::exception& e) {
      fail(path + ".params", what_of(e));
    }
  }

  std::set<int> job_ids;
  bool jobs_ok = true;
  for (std::size_t i = 0; i < s.jobs.size(); ++i) {
    const Job& j = s.jobs[i];
    const std::string path = Reader::index("jobs", i);
    if (!job_ids.insert(j.job_id).second) fail(path + ".id", "duplicate id " + std::to_string(j.job_id));
    if (j.pickup_node == j.destination_node) fail(path, "pickup equals destination");
    if (j.release_tick < 0) fail(path + ".release_tick", "must be >= 0");
    for (const auto& [key, n] : {std::pair{"pickup", j.pickup_node}, std::pair{"destination", j.destination_node}}) {
      const std::string field = path + "." + key;
      if (grid && !grid->contains(n)) {
        fail(field, to_string(n) + " outside the grid");
        jobs_ok = false;
      } else if (grid && grid->is_blocked(n)) {
        fail(field, to_string(n) + " is blocked");
        jobs_ok = false;
      } else if (homes.count(n)) {
        fail(field, to_string(n) + " is a vehicle home");
        jobs_ok = false;
      }
    }
  }
  if (!s.jobs.empty() && s.vehicles.empty()) fail("vehicles", "jobs given but no vehicles");

  // Homes are parked on permanently, so every vehicle must reach every job
  // node with the other homes as walls.
  if (grid && jobs_ok) {
    for (std::size_t i = 0; i < s.vehicles.size(); ++i) {
      const VehicleSpec& v = s.vehicles[i];
      if (!grid->contains(v.home) || grid->is_blocked(v.home)) continue;
      GridMap walls = *grid;
      for (const auto& other : s.vehicles) {
        if (other.home != v.home && walls.contains(other.home)) walls.block(other.home);
      }
      const CostMap reach = bellman_ford(walls, v.home);
      for (std::size_t k = 0; k < s.jobs.size(); ++k) {
        for (const NodeId& n : {s.jobs[k].pickup_node, s.jobs[k].destination_node}) {
          if (!reach.count(n))
            fail(Reader::index("jobs", k), to_string(n) + " unreachable from the home of vehicle " +
                                               std::to_string(v.id));
        }
      }
    }
  }

  if (!(s.medium.loss_probability >= 0.0 && s.medium.loss_probability <= 1.0))
    fail("medium.loss", "must be in [0, 1]");
  if (s.medium.latency_ticks < 0) fail("medium.latency_ticks", "must be >= 0");

  if (!(s.sim.dt_s > 0)) fail("sim.dt_s", "must be positive");
  if (s.sim.max_ticks <= 0) fail("sim.max_ticks", "must be positive");
  if (s.sim.telemetry_interval <= 0) fail("sim.telemetry_interval", "must be positive");
  if (s.sim.radar_steps_per_tick < 1) fail("sim.radar_steps_per_tick", "must be >= 1");
  if (s.sim.frame_interval < 0) fail("sim.frame_interval", "must be >= 0");
  if (s.sim.load_dwell_ticks < 0) fail("sim.load_dwell_ticks", "must be >= 0");
  if (s.sim.unload_dwell_ticks < 0) fail("sim.unload_dwell_ticks", "must be >= 0");
  if (!(s.sim.vehicle_radius_m > 0)) fail("sim.vehicle_radius_m", "must be positive");

  if (!(s.pid.output_limit > 0)) fail("pid.output_limit", "must be positive");
  if (s.pid.kp < 0 || s.pid.ki < 0 || s.pid.kd < 0) fail("pid", "gains must be >= 0");

  if (!diags.empty()) raise(diags);
}

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kScenarioInvalid, std::string("scenario: malformed JSON: ") + e.what());
  }
  std::vector<std::string> diags;
  Scenario s = read(root, diags);
  if (!diags.empty()) raise(diags);
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_scenario(buf.str());
}

std::string to_json(const Scenario& s) {
  const auto node = [](const NodeId& n) { return ojson::array({n.ix, n.iy}); };
  ojson j;
  ojson blocked = ojson::array();
  for (const auto& n : s.terrain.blocked) blocked.push_back(node(n));
  j["terrain"] = {{"width_m", s.terrain.width_m},
                  {"height_m", s.terrain.height_m},
                  {"spacing_m", s.terrain.spacing_m},
                  {"blocked", blocked}};
  j["sensor"] = {{"origin", {s.sensor.origin.x, s.sensor.origin.y}},
                 {"step_deg", s.sensor.step_deg},
                 {"beam_halfwidth_deg", s.sensor.beam_halfwidth_deg},
                 {"max_range_m", s.sensor.max_range_m},
                 {"speed_of_sound_m_s", s.sensor.speed_of_sound_m_s}};
  j["obstacles"] = ojson::array();
  for (const auto& d : s.obstacles)
    j["obstacles"].push_back({{"center", {d.center.x, d.center.y}}, {"radius_m", d.radius_m}});
  j["vehicles"] = ojson::array();
  for (const auto& v : s.vehicles) {
    ojson params = {{"wheelbase_m", v.params.wheelbase_m},
                    {"track_m", v.params.track_m},
                    {"wheel_radius_m", v.params.wheel_radius_m},
                    {"cruise_speed_m_s", v.params.cruise_speed_m_s},
                    {"motor_gain", v.params.motor_gain},
                    {"motor_time_constant_s", v.params.motor_time_constant_s}};
    j["vehicles"].push_back(
        {{"id", v.id}, {"home", node(v.home)}, {"heading", std::string(heading_name(v.heading))}, {"params", params}});
  }
  j["jobs"] = ojson::array();
  for (const auto& job : s.jobs) {
    j["jobs"].push_back({{"id", job.job_id},
                         {"pickup", node(job.pickup_node)},
                         {"destination", node(job.destination_node)},
                         {"release_tick", job.release_tick}});
  }
  j["medium"] = {{"loss", s.medium.loss_probability},
                 {"latency_ticks", s.medium.latency_ticks},
                 {"seed", s.medium.seed}};
  j["sim"] = {{"dt_s", s.sim.dt_s},
              {"max_ticks", s.sim.max_ticks},
              {"telemetry_interval", s.sim.telemetry_interval},
              {"radar_steps_per_tick", s.sim.radar_steps_per_tick},
              {"frame_interval", s.sim.frame_interval},
              {"load_dwell_ticks", s.sim.load_dwell_ticks},
              {"unload_dwell_ticks", s.sim.unload_dwell_ticks},
              {"vehicle_radius_m", s.sim.vehicle_radius_m},
              {"capture_rf", s.sim.capture_rf}};
  j["pid"] = {{"kp", s.pid.kp}, {"ki", s.pid.ki}, {"kd", s.pid.kd}, {"output_limit", s.pid.output_limit}};
  return j.dump(2) + "\n";
}

}  // namespace cargoswarm
