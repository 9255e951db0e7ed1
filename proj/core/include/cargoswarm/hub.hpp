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

#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cargoswarm/grid.hpp"
#include "cargoswarm/planner.hpp"
#include "cargoswarm/radar.hpp"
#include "cargoswarm/reservation.hpp"
#include "cargoswarm/rfnet.hpp"
#include "cargoswarm/vehicle.hpp"

namespace cargoswarm {

struct Job {
  int job_id = 0;
  NodeId pickup_node;
  NodeId destination_node;
  Tick release_tick = 0;

  bool operator==(const Job&) const = default;
};

struct TelemetryRecord {
  Tick tick = 0;
  VehicleId vehicle_id = 0;
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_deg = 0.0;
  double speed_m_s = 0.0;
  double dist_from_origin_m = 0.0;
  double angle_from_origin_deg = 0.0;
  std::string state;
};

/// Decodes wire units and derives distance/bearing from `origin`.
/// atan2(0, 0) is reported as 0.
TelemetryRecord make_telemetry_record(Tick tick, VehicleId vehicle, const TelemetryPayload& t,
                                      const Position& origin = {}, std::string_view state = "");

struct FleetView {
  std::map<VehicleId, TelemetryRecord> latest;
  std::deque<Job> queue;
  std::map<int, VehicleId> assignments;
};

struct HubConfig {
  MotionTiming timing;
  Tick load_dwell_ticks = 20;
  Tick unload_dwell_ticks = 20;
  Tick retransmit_ticks = 20;
  Tick replan_ticks = 50;
  double association_gate_m = 0.3;
  /// Telemetry distances and angles are measured from here.
  Position origin{0.0, 0.0};
};

struct JobCompletion {
  int job_id = 0;
  VehicleId vehicle_id = 0;
  Tick assigned_tick = 0;
  Tick completed_tick = 0;
};

struct HubStats {
  std::size_t assignments_sent = 0;
  std::size_t retransmissions = 0;
  std::size_t plan_failures = 0;
  std::size_t activations = 0;
};

/// Central coordinator. Owns the reservation table and the all-pairs hop
/// table, offers jobs to the nearest idle vehicle over RF and, once the
/// vehicle acknowledges, books its whole cycle (to pickup, to destination,
/// back home along the same nodes) against the reservation table.
class Hub {
 public:
  explicit Hub(GridMap grid, HubConfig config = {});

  /// Registers a vehicle parked at `home`; the home node is reserved for it
  /// indefinitely. Throws kInvalidArgument, kNodeOutOfRange,
  /// kVehicleLimitExceeded.
  void register_vehicle(VehicleId id, NodeId home, Direction heading = Direction::kEast);
  /// Throws kInvalidArgument for bad or duplicate jobs.
  void add_job(const Job& job);

  /// Resends unacknowledged offers, retries failed plans, then offers each
  /// released queued job to the idle vehicle nearest its pickup (ties to
  /// the lower id). Returns the new offers made this call.
  std::vector<std::pair<VehicleId, Job>> dispatch(Tick now, Medium& medium);

  /// Uplink traffic: ACK, ACTIVATE and TELEMETRY.
  void on_message(const Message& message, Tick now, std::string_view state_hint = "");
  /// Throws kUnknownVehicle and kInvalidArgument for non-telemetry input.
  const FleetView& ingest_telemetry(const Message& message, Tick now, std::string_view state_hint = "");

  /// Hands over a freshly booked cycle, once.
  std::optional<Assignment> take_plan(VehicleId vehicle);
  /// Marks the vehicle's job done; the vehicle becomes idle.
  void complete_job(VehicleId vehicle, Tick now);
  void collect_garbage(Tick now) { table_.collect_garbage(now); }

  bool vehicle_idle(VehicleId vehicle) const;
  /// No queued, offered or running jobs.
  bool quiescent() const;
  std::size_t job_count() const { return jobs_.size(); }

  const GridMap& grid() const { return grid_; }
  const HubConfig& config() const { return config_; }
  const ReservationTable& reservations() const { return table_; }
  const AllPairs& distances() const { return distances_; }
  const FleetView& fleet() const { return fleet_; }
  const std::vector<TelemetryRecord>& log() const { return log_; }
  const std::vector<JobCompletion>& completions() const { return completions_; }
  const HubStats& stats() const { return stats_; }

 private:
  struct Member {
    NodeId home;
    Direction heading = Direction::kEast;
  };
  struct Offer {
    Job job;
    Tick assigned_tick = 0;
    Tick last_sent = 0;
    bool acked = false;
    bool planned = false;
    Tick next_plan_try = 0;
  };

  void send_assign(VehicleId vehicle, const Offer& offer, Tick now, Medium& medium);
  bool try_plan(VehicleId vehicle, Offer& offer, Tick now);

  GridMap grid_;
  HubConfig config_;
  AllPairs distances_;
  ReservationTable table_;
  std::map<VehicleId, Member> members_;
  std::map<VehicleId, Offer> offers_;
  std::map<VehicleId, Assignment> plan_book_;
  std::map<int, Job> jobs_;
  FleetView fleet_;
  std::vector<TelemetryRecord> log_;
  std::vector<JobCompletion> completions_;
  HubStats stats_;
};

/// Greedy nearest pairing of radar targets with the latest telemetry poses
/// within `gate_m`; each vehicle is used at most once. Entry i belongs to
/// targets[i]; nullopt means unmatched (an obstacle).
std::vector<std::optional<VehicleId>> associate_radar(const std::vector<TargetEstimate>& targets,
                                                      const FleetView& fleet, double gate_m = 0.3);

/// Header plus one row per record, sorted by (tick, vehicle_id), five
/// decimals. Throws kIoFailure.
void write_csv(const std::vector<TelemetryRecord>& log, const std::filesystem::path& out);
std::string format_csv(const std::vector<TelemetryRecord>& log);

struct VehicleMetrics {
  VehicleId vehicle_id = 0;
  double total_distance_m = 0.0;
  double mean_transit_speed_m_s = 0.0;
  std::vector<Tick> job_completion_ticks;
};

struct SummaryReport {
  std::vector<VehicleMetrics> vehicles;
  Tick makespan_ticks = 0;
  std::size_t completed_jobs = 0;

  std::string to_text() const;
  std::string to_json() const;
};

/// Per-vehicle path length and mean TRANSIT speed from the log. Completion
/// ticks come from `completions` when given, otherwise from RETRACING ->
/// IDLE transitions in the log. Throws kEmptyLog.
SummaryReport metrics(const std::vector<TelemetryRecord>& log, const std::vector<JobCompletion>& completions = {});

}  // namespace cargoswarm
