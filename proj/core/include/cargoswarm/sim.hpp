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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cargoswarm/hub.hpp"
#include "cargoswarm/path_memory.hpp"
#include "cargoswarm/radar.hpp"
#include "cargoswarm/rfnet.hpp"
#include "cargoswarm/scenario.hpp"
#include "cargoswarm/vehicle.hpp"

namespace cargoswarm {

/// One finished delivery cycle as seen by the vehicle.
struct CycleRecord {
  VehicleId vehicle_id = 0;
  int job_id = 0;
  NodeId home;
  std::vector<NodeId> outbound;
  std::vector<NodeId> retraced;
  Pose final_pose;
  Tick started_tick = 0;
  Tick completed_tick = 0;
};

struct SimReport {
  std::size_t total_jobs = 0;
  std::size_t completed_jobs = 0;
  Tick makespan_ticks = 0;
  Tick ticks_run = 0;
  bool all_complete = false;
  std::optional<SummaryReport> summary;
  std::vector<CycleRecord> cycles;
  HubStats hub;
  std::size_t frames_sent = 0;
  std::size_t frames_dropped = 0;
  std::vector<std::filesystem::path> artifacts;
};

/// Fixed-step engine. Each tick runs, in order: radio delivery, hub ingest
/// and dispatch, vehicle steps by ascending id, one radar step, telemetry
/// when due, reservation clean-up.
class Simulation {
 public:
  using Observer = std::function<void(const Simulation&)>;

  /// Validates the scenario (kScenarioInvalid).
  explicit Simulation(Scenario scenario);

  void tick();
  /// All jobs done and every vehicle parked idle at home.
  bool finished() const;
  /// Ticks until finished() or max_ticks; when `out_dir` is non-empty the
  /// artifacts are written there (kIoFailure).
  SimReport run(const std::filesystem::path& out_dir = {});
  /// Called after every tick.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

  Tick now() const { return now_; }
  const Scenario& scenario() const { return scenario_; }
  const GridMap& grid() const { return grid_; }
  const Hub& hub() const { return hub_; }
  const Medium& medium() const { return medium_; }
  const std::vector<Vehicle>& vehicles() const { return vehicles_; }
  const PathMemory& memory() const { return memory_; }
  const MotionTiming& timing() const { return timing_; }
  const std::vector<CycleRecord>& cycles() const { return cycles_; }
  /// Radar frame lines emitted so far.
  const std::string& radar_stream() const { return radar_stream_; }
  const std::optional<Scan>& last_sweep() const { return last_sweep_; }
  /// Radar targets from the last full sweep and their vehicle matches.
  const std::vector<TargetEstimate>& last_targets() const { return last_targets_; }
  const std::vector<std::optional<VehicleId>>& last_matches() const { return last_matches_; }
  WorldModel radar_world() const;

 private:
  void deliver();
  void advance_radar();
  void send(VehicleId vehicle, const Message& message);
  SimReport report() const;

  Scenario scenario_;
  GridMap grid_;
  MotionTiming timing_;
  Hub hub_;
  Medium medium_;
  std::vector<Vehicle> vehicles_;
  PathMemory memory_;
  Tick now_ = 0;
  std::vector<Message> uplink_;
  std::vector<CycleRecord> cycles_;
  std::vector<Tick> cycle_start_;

  std::vector<double> angles_;
  std::size_t angle_at_ = 0;
  int direction_ = +1;
  Scan current_sweep_;
  std::optional<Scan> last_sweep_;
  std::vector<TargetEstimate> last_targets_;
  std::vector<std::optional<VehicleId>> last_matches_;
  std::string radar_stream_;
  std::vector<std::pair<Tick, std::string>> frames_;

  Observer observer_;
};

/// Analytic makespan estimate in ticks for one vehicle's cycle: straight
/// travel at cruise speed, in-place turns at cruise wheel speed, one motor
/// lag per start from standstill, plus the load and unload dwell.
double estimate_cycle_ticks(const Scenario& scenario, const VehicleSpec& vehicle, const Job& job);

}  // namespace cargoswarm
