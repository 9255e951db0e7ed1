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
#include <optional>
#include <string>
#include <vector>

#include "cargoswarm/grid.hpp"

namespace cargoswarm {

/// Servo-swept ultrasonic ranger configuration.
struct SweepConfig {
  Position origin{1.0, 1.0};
  double step_deg = 1.0;
  double beam_halfwidth_deg = 0.0;
  double max_range_m = 4.0;
  double speed_of_sound_m_s = 343.0;

  /// Throws kInvalidArgument naming the offending field.
  void validate() const;
};

struct Disc {
  Position center;
  double radius_m = 0.2;
};

struct WorldModel {
  std::vector<Disc> obstacles;
};

struct RadarSample {
  double angle_deg = 0.0;
  std::optional<double> distance_m;
};

struct Scan {
  std::vector<RadarSample> samples;
  int direction = +1;
};

struct TargetEstimate {
  Position centroid;
  double angle_deg = 0.0;
  double distance_m = 0.0;
  int sample_count = 0;
};

/// Axis-aligned terrain rectangle drawn by render_frame.
struct TerrainBounds {
  double width_m = 2.0;
  double height_m = 2.0;
};

/// Nearest echo within the beam cone around `angle_deg`, or nullopt when
/// nothing lies within max range. A sensor inside a disc reads 0.
std::optional<double> echo_distance(const WorldModel& world, const SweepConfig& cfg, double angle_deg);

/// Round-trip acoustic time in seconds. Throws kNonPositiveSpeed.
double time_of_flight(double distance_m, double speed_of_sound_m_s);

/// Samples start, start +/- step, ... through end inclusive.
Scan sweep(const WorldModel& world, const SweepConfig& cfg, double start_deg, double end_deg);

/// East = 0 deg, counter-clockwise positive.
Position polar_to_cartesian(const Position& origin, double angle_deg, double distance_m);

/// Bearing of `p` from `origin` in [0, 360).
double bearing_deg(const Position& origin, const Position& p);

/// Groups runs of consecutive echoes into targets. Two neighboring samples
/// belong to one run when their ranges differ by less than kClusterGap; a
/// scan spanning the full circle joins the runs at its two ends.
std::vector<TargetEstimate> detect_targets(const Scan& scan, const SweepConfig& cfg);

inline constexpr double kClusterGap = 0.1;

/// Serial frame `<angle>,<distance_mm>.\n`; a missing echo encodes as 0.
/// Throws kAngleOutOfRange unless 0 <= angle < 360.
std::string encode_frame(double angle_deg, std::optional<double> distance_m);

/// Deterministic SVG of the terrain, the sensor, the sweep ray at the last
/// sample and one mark per echo.
std::string render_svg(const Scan& scan, const TerrainBounds& bounds, const SweepConfig& cfg);
/// Writes render_svg to disk. Throws kIoFailure.
void render_frame(const Scan& scan, const TerrainBounds& bounds, const SweepConfig& cfg,
                  const std::filesystem::path& out_path);

}  // namespace cargoswarm
