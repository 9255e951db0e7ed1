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

#include "cargoswarm/radar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "cargoswarm/error.hpp"

namespace cargoswarm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double normalize_deg(double a) {
  double r = std::fmod(a, 360.0);
  if (r < 0.0) r += 360.0;
  return r >= 360.0 ? 0.0 : r;
}

// Signed smallest rotation from a to b, in (-180, 180].
double signed_delta_deg(double a, double b) {
  double d = std::fmod(b - a, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

// Range along a ray offset `off_deg` from the bearing to a disc whose center
// sits `dc` away; nullopt if the ray misses.
std::optional<double> ray_disc_range(double dc, double radius, double off_deg) {
  const double c = std::cos(off_deg * kDegToRad);
  const double s = std::sin(off_deg * kDegToRad);
  if (c <= 0.0) return std::nullopt;
  const double disc = radius * radius - dc * dc * s * s;
  if (disc < 0.0) return std::nullopt;
  return dc * c - std::sqrt(disc);
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void SweepConfig::validate() const {
  if (!(step_deg > 0.0 && step_deg <= 15.0)) throw Error(ErrorCode::kInvalidArgument, "step_deg must be in (0, 15]");
  if (!(beam_halfwidth_deg >= 0.0 && beam_halfwidth_deg <= 15.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beam_halfwidth_deg must be in [0, 15]");
  }
  if (!(max_range_m > 0.0)) throw Error(ErrorCode::kInvalidArgument, "max_range_m must be > 0");
  if (!(speed_of_sound_m_s > 0.0)) throw Error(ErrorCode::kNonPositiveSpeed, "speed_of_sound_m_s must be > 0");
}

std::optional<double> echo_distance(const WorldModel& world, const SweepConfig& cfg, double angle_deg) {
  std::optional<double> best;
  const double angle = normalize_deg(angle_deg);
  for (const Disc& d : world.obstacles) {
    const double dx = d.center.x - cfg.origin.x;
    const double dy = d.center.y - cfg.origin.y;
    const double dc = std::hypot(dx, dy);
    double range;
    if (dc <= d.radius_m) {
      range = 0.0;
    } else {
      const double bearing = std::atan2(dy, dx) / kDegToRad;
      const double delta = signed_delta_deg(angle, bearing);
      if (std::abs(delta) <= cfg.beam_halfwidth_deg) {
        range = dc - d.radius_m;
      } else {
        // The closest part of the disc inside the cone lies on the cone edge
        // nearer the disc's bearing.
        const double off = delta - std::copysign(cfg.beam_halfwidth_deg, delta);
        auto r = ray_disc_range(dc, d.radius_m, off);
        if (!r) continue;
        range = *r;
      }
    }
    if (range > cfg.max_range_m) continue;
    if (!best || range < *best) best = range;
  }
  return best;
}

double time_of_flight(double distance_m, double speed_of_sound_m_s) {
  if (!(speed_of_sound_m_s > 0.0)) throw Error(ErrorCode::kNonPositiveSpeed, "speed of sound must be > 0");
  if (distance_m < 0.0) throw Error(ErrorCode::kInvalidArgument, "distance must be >= 0");
  return 2.0 * distance_m / speed_of_sound_m_s;
}

Scan sweep(const WorldModel& world, const SweepConfig& cfg, double start_deg, double end_deg) {
  cfg.validate();
  if (start_deg == end_deg) throw Error(ErrorCode::kInvalidArgument, "sweep start equals end");
  Scan scan;
  scan.direction = end_deg > start_deg ? +1 : -1;
  const auto count = static_cast<int>(std::floor(std::abs(end_deg - start_deg) / cfg.step_deg + 1e-9)) + 1;
  scan.samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double a = start_deg + scan.direction * i * cfg.step_deg;
    scan.samples.push_back({a, echo_distance(world, cfg, a)});
  }
  return scan;
}

Position polar_to_cartesian(const Position& origin, double angle_deg, double distance_m) {
  const double t = angle_deg * kDegToRad;
  return {origin.x + distance_m * std::cos(t), origin.y + distance_m * std::sin(t)};
}

double bearing_deg(const Position& origin, const Position& p) {
  if (p.x == origin.x && p.y == origin.y) return 0.0;
  return normalize_deg(std::atan2(p.y - origin.y, p.x - origin.x) / kDegToRad);
}

std::vector<TargetEstimate> detect_targets(const Scan& scan, const SweepConfig& cfg) {
  const auto& s = scan.samples;
  std::vector<std::vector<std::size_t>> runs;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i].distance_m) continue;
    const bool extends = i > 0 && s[i - 1].distance_m && !runs.empty() && runs.back().back() == i - 1 &&
                         std::abs(*s[i].distance_m - *s[i - 1].distance_m) < kClusterGap;
    if (extends) {
      runs.back().push_back(i);
    } else {
      runs.push_back({i});
    }
  }

  if (runs.size() > 1 && s.size() > 1) {
    const double span = std::abs(s.back().angle_deg - s.front().angle_deg) + cfg.step_deg;
    const bool full_circle = span >= 360.0 - 1e-9;
    const auto& first = runs.front();
    const auto& last = runs.back();
    if (full_circle && first.front() == 0 && last.back() == s.size() - 1 &&
        std::abs(*s.front().distance_m - *s.back().distance_m) < kClusterGap) {
      runs.front().insert(runs.front().begin(), last.begin(), last.end());
      runs.pop_back();
    }
  }

  std::vector<TargetEstimate> out;
  out.reserve(runs.size());
  for (const auto& run : runs) {
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i : run) {
      const Position p = polar_to_cartesian(cfg.origin, s[i].angle_deg, *s[i].distance_m);
      sx += p.x;
      sy += p.y;
    }
    TargetEstimate t;
    t.sample_count = static_cast<int>(run.size());
    t.centroid = {sx / t.sample_count, sy / t.sample_count};
    t.angle_deg = bearing_deg(cfg.origin, t.centroid);
    t.distance_m = distance(cfg.origin, t.centroid);
    out.push_back(t);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TargetEstimate& a, const TargetEstimate& b) { return a.angle_deg < b.angle_deg; });
  return out;
}

std::string encode_frame(double angle_deg, std::optional<double> distance_m) {
  if (!(angle_deg >= 0.0 && angle_deg < 360.0)) {
    throw Error(ErrorCode::kAngleOutOfRange, "angle " + std::to_string(angle_deg) + " outside [0, 360)");
  }
  const long angle = static_cast<long>(std::floor(angle_deg));
  const long mm = distance_m ? std::lround(*distance_m * 1000.0) : 0L;
  return std::to_string(angle) + "," + std::to_string(mm) + ".\n";
}

std::string render_svg(const Scan& scan, const TerrainBounds& bounds, const SweepConfig& cfg) {
  constexpr double kScale = 200.0;  // px per meter
  constexpr double kMargin = 20.0;
  const double w = bounds.width_m * kScale + 2 * kMargin;
  const double h = bounds.height_m * kScale + 2 * kMargin;
  auto px = [&](const Position& p) {
    return std::pair{fmt2(kMargin + p.x * kScale), fmt2(kMargin + (bounds.height_m - p.y) * kScale)};
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(w) + "\" height=\"" + fmt2(h) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"black\"/>\n";
  svg += "<rect class=\"terrain\" x=\"" + fmt2(kMargin) + "\" y=\"" + fmt2(kMargin) + "\" width=\"" +
         fmt2(bounds.width_m * kScale) + "\" height=\"" + fmt2(bounds.height_m * kScale) +
         "\" fill=\"none\" stroke=\"#00ff00\"/>\n";
  const auto [ox, oy] = px(cfg.origin);
  svg += "<circle class=\"sensor\" cx=\"" + ox + "\" cy=\"" + oy + "\" r=\"4\" fill=\"#00ff00\"/>\n";
  if (!scan.samples.empty()) {
    const RadarSample& last = scan.samples.back();
    const auto [rx, ry] = px(polar_to_cartesian(cfg.origin, last.angle_deg, last.distance_m.value_or(cfg.max_range_m)));
    svg += "<line class=\"ray\" x1=\"" + ox + "\" y1=\"" + oy + "\" x2=\"" + rx + "\" y2=\"" + ry +
           "\" stroke=\"#00ff00\"/>\n";
  }
  for (const RadarSample& s : scan.samples) {
    if (!s.distance_m) continue;
    const auto [ex, ey] = px(polar_to_cartesian(cfg.origin, s.angle_deg, *s.distance_m));
    svg += "<circle class=\"echo\" cx=\"" + ex + "\" cy=\"" + ey + "\" r=\"2\" fill=\"red\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void render_frame(const Scan& scan, const TerrainBounds& bounds, const SweepConfig& cfg,
                  const std::filesystem::path& out_path) {
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + out_path.string());
  out << render_svg(scan, bounds, cfg);
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + out_path.string());
}

}  // namespace cargoswarm
