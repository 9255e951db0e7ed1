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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cargoswarm/grid.hpp"
#include "cargoswarm/hub.hpp"
#include "cargoswarm/radar.hpp"
#include "cargoswarm/rfnet.hpp"
#include "cargoswarm/vehicle.hpp"

namespace cargoswarm {

struct TerrainConfig {
  double width_m = 2.0;
  double height_m = 2.0;
  double spacing_m = 0.25;
  std::vector<NodeId> blocked;
};

struct VehicleSpec {
  VehicleId id = 0;
  NodeId home;
  Direction heading = Direction::kEast;
  VehicleParams params;
};

struct SimConfig {
  double dt_s = 0.01;
  Tick max_ticks = 1'000'000;
  Tick telemetry_interval = 10;
  int radar_steps_per_tick = 1;
  /// Render an SVG frame every this many ticks; 0 disables frames.
  Tick frame_interval = 1000;
  Tick load_dwell_ticks = 20;
  Tick unload_dwell_ticks = 20;
  /// Radius of the disc a vehicle presents to the radar.
  double vehicle_radius_m = 0.2;
  bool capture_rf = false;
};

struct Scenario {
  TerrainConfig terrain;
  SweepConfig sensor;
  std::vector<Disc> obstacles;
  std::vector<VehicleSpec> vehicles;
  std::vector<Job> jobs;
  MediumConfig medium;
  SimConfig sim;
  PidGains pid;
};

inline constexpr std::size_t kMaxVehicles = 128;

/// 2 x 2 m terrain, 0.25 m pitch, sensor at the centre, two vehicles at the
/// bottom corners, one job each.
Scenario default_scenario();

/// Throws kScenarioInvalid listing every problem as "field: reason".
void validate(const Scenario& scenario);

/// Parses and validates. Unknown keys are rejected. Throws kScenarioInvalid.
Scenario parse_scenario(std::string_view json_text);
/// Throws kIoFailure or kScenarioInvalid.
Scenario load_scenario(const std::filesystem::path& path);
std::string to_json(const Scenario& scenario);

GridMap build_grid(const Scenario& scenario);

}  // namespace cargoswarm
