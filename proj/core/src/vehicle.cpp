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

#include "cargoswarm/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cargoswarm/error.hpp"

namespace cargoswarm {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double wrap_deg(double a) {
  a = std::fmod(a, 360.0);
  if (a < 0) a += 360.0;
  if (a >= 360.0) a -= 360.0;
  return a;
}

// signed shortest rotation from `from` to `to`, in (-180, 180]
double delta_deg(double from, double to) {
  double d = wrap_deg(to - from);
  if (d > 180.0) d -= 360.0;
  return d;
}

std::uint16_t clamp_u16(double v) {
  if (!(v > 0)) return 0;
  if (v > 65535.0) return 65535;
  return static_cast<std::uint16_t>(std::lround(v));
}

}  // namespace

void VehicleParams::validate() const {
  if (!(wheelbase_m > 0) || !(track_m > 0) || !(wheel_radius_m > 0) || !(cruise_speed_m_s > 0) ||
      !(motor_gain > 0) || !(motor_time_constant_s > 0))
    throw Error(ErrorCode::kInvalidArgument, "vehicle parameters must be positive");
}

double VehicleParams::turn_rate_deg_s() const {
  return 2.0 * wheel_radius_m * cruise_wheel_omega() / track_m * kRadToDeg;
}

double pid_update(PidState& pid, double setpoint, double measured, double dt_s) {
  if (!(dt_s > 0)) throw Error(ErrorCode::kInvalidArgument, "pid dt must be positive");
  const double e = setpoint - measured;
  pid.integral += e * dt_s;
  if (pid.ki > 0) {
    const double cap = pid.output_limit / pid.ki;
    pid.integral = std::clamp(pid.integral, -cap, cap);
  }
  const double deriv = (e - pid.prev_error) / dt_s;
  pid.prev_error = e;
  const double u = pid.kp * e + pid.ki * pid.integral + pid.kd * deriv;
  return std::clamp(u, -pid.output_limit, pid.output_limit);
}

double motor_step(double omega, double u, const VehicleParams& params, double dt_s) {
  if (!(dt_s > 0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  if (dt_s > params.motor_time_constant_s / 2.0)
    throw Error(ErrorCode::kTimestepTooLarge, "dt " + std::to_string(dt_s) + " s exceeds tau/2");
  return omega + dt_s / params.motor_time_constant_s * (params.motor_gain * u - omega);
}

DriveTrain::DriveTrain(const VehicleParams& params, const PidGains& gains)
    : params_(params), left_(PidState::from(gains)), right_(PidState::from(gains)) {}

void DriveTrain::regulate(double left_setpoint, double right_setpoint, double dt_s) {
  const double ul = pid_update(left_, left_setpoint, wheels_.omega_left, dt_s);
  const double ur = pid_update(right_, right_setpoint, wheels_.omega_right, dt_s);
  wheels_.omega_left = motor_step(wheels_.omega_left, ul, params_, dt_s);
  wheels_.omega_right = motor_step(wheels_.omega_right, ur, params_, dt_s);
}

double DriveTrain::straight_step(double dt_s) {
  const double w = params_.cruise_wheel_omega();
  regulate(w, w, dt_s);
  return linear_speed() * dt_s;
}

double DriveTrain::turn_step(int direction, double dt_s) {
  const double w = params_.cruise_wheel_omega() * (direction >= 0 ? 1.0 : -1.0);
  regulate(-w, w, dt_s);
  return yaw_rate_deg_s() * dt_s;
}

void DriveTrain::stop() {
  wheels_ = {};
  left_.reset();
  right_.reset();
}

double DriveTrain::linear_speed() const {
  return params_.wheel_radius_m * (wheels_.omega_left + wheels_.omega_right) / 2.0;
}

double DriveTrain::yaw_rate_deg_s() const {
  return params_.wheel_radius_m * (wheels_.omega_right - wheels_.omega_left) / params_.track_m * kRadToDeg;
}

MotionTiming measure_motion_timing(const VehicleParams& params, const PidGains& gains, double spacing_m,
                                   double dt_s, double margin) {
  params.validate();
  if (!(spacing_m > 0)) throw Error(ErrorCode::kInvalidArgument, "spacing must be positive");
  const double tol = spacing_m / 10.0;
  const auto pad = [margin](long n) { return static_cast<Tick>(std::ceil(n * (1.0 + margin))) + 2; };

  DriveTrain d(params, gains);
  long hop = 0;
  for (double dist = 0; spacing_m - dist > tol; ++hop) dist += d.straight_step(dt_s);

  const auto turn = [&](double target) {
    DriveTrain t(params, gains);
    long n = 0;
    double angle = 0;
    while (true) {
      const double p = t.turn_step(1, dt_s);
      ++n;
      if (angle + p >= target) break;
      angle += p;
    }
    return n;
  };
  return {pad(hop), pad(turn(90.0)), pad(turn(180.0))};
}

std::string_view to_string(VehicleState s) {
  switch (s) {
    case VehicleState::kIdle: return "IDLE";
    case VehicleState::kLoaded: return "LOADED";
    case VehicleState::kAwaitingRoute: return "AWAITING_ROUTE";
    case VehicleState::kTransit: return "TRANSIT";
    case VehicleState::kUnloading: return "UNLOADING";
    case VehicleState::kRetracing: return "RETRACING";
  }
  return "?";
}

Vehicle::Vehicle(VehicleId id, NodeId home, const GridMap& grid, VehicleParams params, PidGains gains,
                 Direction heading)
    : id_(id), home_(home), params_(params), spacing_m_(grid.spacing_m()), drive_(params, gains), current_(home) {
  params_.validate();
  if (!grid.contains(home)) throw Error(ErrorCode::kNodeOutOfRange, "home " + to_string(home) + " off grid");
  const Position p = grid.node_to_position(home);
  pose_ = {p.x, p.y, heading_deg(heading)};
}

void Vehicle::require(bool ok, std::string_view action) const {
  if (!ok)
    throw Error(ErrorCode::kIllegalTransition, "vehicle " + std::to_string(id_) + ": " + std::string(action) +
                                                   " not allowed in " + std::string(to_string(state_)));
}

Vehicle::Leg Vehicle::make_leg(const TimedPath& path) {
  Leg leg;
  for (const auto& s : path.steps) {
    leg.nodes.push_back(s.node);
    leg.depart.push_back(s.depart_tick);
  }
  return leg;
}

void Vehicle::press_load_switch() {
  require(state_ == VehicleState::kIdle && !positioning_, "load switch");
  state_ = VehicleState::kLoaded;
  outbox_.push_back(Message::activate(id_));
}

void Vehicle::on_destination(const NodeId& dest, const TimedPath& path) {
  if (state_ == VehicleState::kTransit || state_ == VehicleState::kUnloading ||
      state_ == VehicleState::kRetracing) {
    outbox_.push_back(Message::ack(id_));
    return;
  }
  require(state_ == VehicleState::kLoaded || state_ == VehicleState::kAwaitingRoute, "destination");
  if (path.empty() || path.origin() != current_ || path.destination() != dest)
    throw Error(ErrorCode::kInvalidArgument, "route does not lead from " + to_string(current_) + " to " +
                                                 to_string(dest));
  dest_ = dest;
  pending_dest_.reset();
  leg_ = make_leg(path);
  recording_ = true;
  state_ = VehicleState::kTransit;
  outbox_.push_back(Message::ack(id_));
}

void Vehicle::unload(PathMemory& memory, const TimedPath* timing) {
  require(state_ == VehicleState::kUnloading, "unload");
  last_outbound_ = memory.sequence(id_);
  Path back = memory.retrace(id_);
  if (timing) {
    if (timing->spatial().nodes != back.nodes)
      throw Error(ErrorCode::kInvalidArgument, "retrace timing does not follow the recorded path");
    leg_ = make_leg(*timing);
  } else {
    Leg leg;
    leg.nodes = back.nodes;
    leg.depart.assign(back.nodes.size(), 0);
    leg_ = std::move(leg);
  }
  retraced_ = {current_};
  recording_ = false;
  state_ = VehicleState::kRetracing;
}

void Vehicle::start_assignment(Assignment assignment, PathMemory& memory) {
  require(state_ == VehicleState::kIdle && !positioning_, "assignment");
  if (assignment.positioning.empty() || assignment.positioning.origin() != current_ ||
      assignment.positioning.destination() != assignment.pickup)
    throw Error(ErrorCode::kInvalidArgument, "positioning route must lead from " + to_string(current_) +
                                                 " to the pickup");
  memory.clear(id_);
  memory.record(id_, current_);
  leg_ = make_leg(assignment.positioning);
  assignment_ = std::move(assignment);
  pending_dest_ = assignment_->destination;
  positioning_ = true;
  recording_ = true;
}

void Vehicle::receive(const Message& message) {
  if (message.vehicle_id != id_ || message.kind != MessageKind::kAssignDestination) return;
  if (state_ == VehicleState::kIdle && !positioning_) pending_dest_ = message.destination();
  outbox_.push_back(Message::ack(id_));
}

std::vector<Message> Vehicle::take_outbox() {
  std::vector<Message> out;
  out.swap(outbox_);
  if (state_ == VehicleState::kLoaded &&
      std::any_of(out.begin(), out.end(), [](const Message& m) { return m.kind == MessageKind::kActivate; }))
    state_ = VehicleState::kAwaitingRoute;
  return out;
}

void Vehicle::finish_leg() {
  leg_.reset();
  drive_.stop();
  if (positioning_) {
    positioning_ = false;
    event_ = VehicleEvent::kReachedPickup;
  } else if (state_ == VehicleState::kTransit) {
    state_ = VehicleState::kUnloading;
    event_ = VehicleEvent::kReachedDestination;
  } else if (state_ == VehicleState::kRetracing) {
    state_ = VehicleState::kIdle;
    dest_.reset();
    pending_dest_.reset();
    assignment_.reset();
    event_ = VehicleEvent::kReturnedHome;
  }
}

Pose Vehicle::step(const GridMap& grid, double dt_s, Tick now, PathMemory& memory) {
  event_ = VehicleEvent::kNone;
  if (dt_s > params_.motor_time_constant_s / 2.0)
    throw Error(ErrorCode::kTimestepTooLarge, "dt " + std::to_string(dt_s) + " s exceeds tau/2");

  if (state_ == VehicleState::kAwaitingRoute && assignment_) on_destination(assignment_->destination,
                                                                           assignment_->transit);

  const bool moving = positioning_ || state_ == VehicleState::kTransit || state_ == VehicleState::kRetracing;
  if (!moving || !leg_) {
    drive_.stop();
    return pose_;
  }
  if (leg_->done()) {
    finish_leg();
    return pose_;
  }

  const NodeId target = leg_->nodes[leg_->at + 1];
  const Direction dir = direction_between(current_, target);
  const double want = heading_deg(dir);
  const double turn = delta_deg(pose_.heading_deg, want);

  if (std::abs(turn) > 1e-9) {
    const double p = drive_.turn_step(turn > 0 ? 1 : -1, dt_s);
    if (std::abs(p) >= std::abs(turn)) {
      pose_.heading_deg = want;
      drive_.stop();
    } else {
      pose_.heading_deg = wrap_deg(pose_.heading_deg + p);
    }
    return pose_;
  }
  if (now < leg_->depart[leg_->at]) {
    drive_.stop();
    return pose_;
  }

  const Position goal = grid.node_to_position(target);
  const double ds = drive_.straight_step(dt_s);
  const double rad = want / kRadToDeg;
  pose_.x += ds * std::cos(rad);
  pose_.y += ds * std::sin(rad);
  // project back onto the grid line to stop drift from cos/sin rounding
  if (dir == Direction::kEast || dir == Direction::kWest)
    pose_.y = goal.y;
  else
    pose_.x = goal.x;

  if (distance({pose_.x, pose_.y}, goal) <= spacing_m_ / 10.0) {
    pose_.x = goal.x;
    pose_.y = goal.y;
    current_ = target;
    ++leg_->at;
    event_ = VehicleEvent::kEnteredNode;
    if (recording_) memory.record(id_, target);
    if (state_ == VehicleState::kRetracing) retraced_.push_back(target);
    if (leg_->done()) {
      finish_leg();
      if (event_ == VehicleEvent::kNone) event_ = VehicleEvent::kEnteredNode;
      return pose_;
    }
    const bool straight_on = direction_between(target, leg_->nodes[leg_->at + 1]) == dir;
    if (!straight_on || now + 1 < leg_->depart[leg_->at]) drive_.stop();
  }
  return pose_;
}

TelemetryPayload Vehicle::telemetry() const {
  TelemetryPayload t;
  t.x_mm = clamp_u16(pose_.x * 1000.0);
  t.y_mm = clamp_u16(pose_.y * 1000.0);
  t.speed_mm_s = clamp_u16(std::abs(linear_speed()) * 1000.0);
  t.heading_cdeg = static_cast<std::uint16_t>(std::lround(pose_.heading_deg * 100.0) % 36000);
  return t;
}

}  // namespace cargoswarm
