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

#include <optional>
#include <string_view>
#include <vector>

#include "cargoswarm/grid.hpp"
#include "cargoswarm/path_memory.hpp"
#include "cargoswarm/reservation.hpp"
#include "cargoswarm/rfnet.hpp"

namespace cargoswarm {

/// Chassis and drive constants. Geometry defaults are the prototype's
/// (360 mm wheelbase, 350 mm track, 100 mm wheels).
struct VehicleParams {
  double wheelbase_m = 0.36;
  double track_m = 0.35;
  double wheel_radius_m = 0.05;
  double cruise_speed_m_s = 0.1;
  /// First-order motor plant: tau * d(omega)/dt = K * u - omega.
  double motor_gain = 1.0;
  double motor_time_constant_s = 0.2;

  /// Throws kInvalidArgument unless every field is positive.
  void validate() const;
  double cruise_wheel_omega() const { return cruise_speed_m_s / wheel_radius_m; }
  /// Yaw rate in deg/s of a turn in place with both wheels at cruise speed.
  double turn_rate_deg_s() const;
};

struct PidGains {
  double kp = 2.0;
  double ki = 5.0;
  double kd = 0.0;
  double output_limit = 5.0;
};

struct PidState {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double output_limit = 0.0;
  double integral = 0.0;
  double prev_error = 0.0;

  static PidState from(const PidGains& g) { return {g.kp, g.ki, g.kd, g.output_limit}; }
  void reset() {
    integral = 0.0;
    prev_error = 0.0;
  }
};

/// One PID step; the integral is clamped to +/- limit/ki and the output to
/// +/- limit. Throws kInvalidArgument unless dt_s > 0.
double pid_update(PidState& pid, double setpoint, double measured, double dt_s);

/// Explicit Euler step of the motor plant. Throws kTimestepTooLarge when
/// dt_s exceeds half the motor time constant.
double motor_step(double omega, double u, const VehicleParams& params, double dt_s);

struct WheelDynamics {
  double omega_left = 0.0;
  double omega_right = 0.0;
};

/// Two PID-regulated wheels. Used by the vehicle and by timing estimates so
/// both integrate exactly the same way.
class DriveTrain {
 public:
  DriveTrain(const VehicleParams& params, const PidGains& gains);

  /// Both wheels forward at cruise speed; returns distance covered (m).
  double straight_step(double dt_s);
  /// Counter-rotating wheels; returns heading change (deg), sign = direction.
  double turn_step(int direction, double dt_s);
  void stop();

  const WheelDynamics& wheels() const { return wheels_; }
  double linear_speed() const;
  double yaw_rate_deg_s() const;

 private:
  void regulate(double left_setpoint, double right_setpoint, double dt_s);

  VehicleParams params_;
  PidState left_;
  PidState right_;
  WheelDynamics wheels_;
};

/// Planned tick budgets for motion primitives, measured by integrating the
/// drivetrain from standstill and padded by `margin`.
struct MotionTiming {
  Tick hop_ticks = 1;
  Tick quarter_turn_ticks = 0;
  Tick half_turn_ticks = 0;
};

MotionTiming measure_motion_timing(const VehicleParams& params, const PidGains& gains, double spacing_m,
                                   double dt_s, double margin = 0.05);

enum class VehicleState { kIdle, kLoaded, kAwaitingRoute, kTransit, kUnloading, kRetracing };

std::string_view to_string(VehicleState s);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading_deg = 0.0;
};

/// Everything a vehicle needs for one delivery cycle: drive to pickup, carry
/// to the destination, then retrace home. Timings come from the hub.
struct Assignment {
  int job_id = -1;
  NodeId pickup;
  NodeId destination;
  TimedPath positioning;
  TimedPath transit;
  TimedPath retrace;
};

enum class VehicleEvent { kNone, kEnteredNode, kReachedPickup, kReachedDestination, kReturnedHome };

/// One cargo vehicle: state machine, drivetrain and waypoint follower.
///
/// State flow is IDLE -> LOADED -> AWAITING_ROUTE -> TRANSIT -> UNLOADING ->
/// RETRACING -> IDLE. The drive from the home terminal to a pickup happens
/// while still IDLE (the vehicle is empty); nodes entered from the moment the
/// assignment starts are recorded so the retrace brings it back home.
class Vehicle {
 public:
  Vehicle(VehicleId id, NodeId home, const GridMap& grid, VehicleParams params = {}, PidGains gains = {},
          Direction heading = Direction::kEast);

  VehicleId id() const { return id_; }
  VehicleState state() const { return state_; }
  const Pose& pose() const { return pose_; }
  const WheelDynamics& wheels() const { return drive_.wheels(); }
  const VehicleParams& params() const { return params_; }
  NodeId home_node() const { return home_; }
  std::optional<NodeId> dest_node() const { return dest_; }
  std::optional<NodeId> pending_destination() const { return pending_dest_; }
  bool positioning() const { return positioning_; }
  bool has_assignment() const { return assignment_.has_value(); }
  const std::optional<Assignment>& assignment() const { return assignment_; }
  VehicleEvent last_event() const { return event_; }
  /// Current node while parked; the node last entered while moving.
  NodeId current_node() const { return current_; }
  double linear_speed() const { return drive_.linear_speed(); }
  /// Outbound sequence handed to the last retrace, and the nodes actually
  /// driven during it (starting at the destination).
  const std::vector<NodeId>& last_outbound() const { return last_outbound_; }
  const std::vector<NodeId>& retraced_nodes() const { return retraced_; }

  /// IDLE -> LOADED; queues ACTIVATE. Throws kIllegalTransition.
  void press_load_switch();
  /// LOADED/AWAITING_ROUTE -> TRANSIT following `path`; queues ACK. While
  /// already moving or unloading a repeat only re-acknowledges.
  void on_destination(const NodeId& dest, const TimedPath& path);
  /// UNLOADING -> RETRACING along the reversed recorded path. When `timing`
  /// is given its spatial route must equal that reversal.
  void unload(PathMemory& memory, const TimedPath* timing = nullptr);
  /// Starts a delivery cycle from IDLE with the drive to the pickup.
  void start_assignment(Assignment assignment, PathMemory& memory);

  /// Radio input. ASSIGN_DESTINATION is stored as the pending job while
  /// IDLE and always acknowledged.
  void receive(const Message& message);
  /// Drains queued messages; handing out ACTIVATE moves LOADED to
  /// AWAITING_ROUTE.
  std::vector<Message> take_outbox();

  /// Advances one control period. Turns in place toward the next waypoint,
  /// holds until its departure tick, then drives straight; waypoints are
  /// snapped to within spacing/10.
  Pose step(const GridMap& grid, double dt_s, Tick now, PathMemory& memory);

  TelemetryPayload telemetry() const;

 private:
  struct Leg {
    std::vector<NodeId> nodes;
    std::vector<Tick> depart;
    std::size_t at = 0;

    bool done() const { return at + 1 >= nodes.size(); }
  };

  static Leg make_leg(const TimedPath& path);
  void finish_leg();
  void require(bool ok, std::string_view action) const;

  VehicleId id_;
  NodeId home_;
  VehicleParams params_;
  double spacing_m_;
  DriveTrain drive_;
  VehicleState state_ = VehicleState::kIdle;
  Pose pose_;
  NodeId current_;
  std::optional<NodeId> dest_;
  std::optional<NodeId> pending_dest_;
  std::optional<Assignment> assignment_;
  bool positioning_ = false;
  bool recording_ = false;
  std::optional<Leg> leg_;
  std::vector<Message> outbox_;
  VehicleEvent event_ = VehicleEvent::kNone;
  std::vector<NodeId> last_outbound_;
  std::vector<NodeId> retraced_;
};

}  // namespace cargoswarm
