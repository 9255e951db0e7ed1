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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cargoswarm/radar.hpp"
#include "expect_code.hpp"
#include "oracles.hpp"

using namespace cargoswarm;

namespace {

int count_of(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

TEST(Echo, EmptyWorldHasNoEcho) {
  EXPECT_FALSE(echo_distance({}, SweepConfig{}, 0.0).has_value());
}

TEST(Echo, DiscStraightAhead) {
  const WorldModel w{{{{1.5, 1.0}, 0.1}}};
  const auto d = echo_distance(w, SweepConfig{}, 0.0);
  ASSERT_TRUE(d);
  EXPECT_NEAR(*d, 0.4, 1e-12);
  EXPECT_FALSE(echo_distance(w, SweepConfig{}, 180.0).has_value());
}

TEST(Echo, RangeCap) {
  const WorldModel w{{{{6.2, 1.0}, 0.2}}};  // near face at 5.0 m
  EXPECT_FALSE(echo_distance(w, SweepConfig{}, 0.0).has_value());
  SweepConfig wide;
  wide.max_range_m = 6.0;
  EXPECT_NEAR(*echo_distance(w, wide, 0.0), 5.0, 1e-12);
}

TEST(Echo, NearestOfSeveral) {
  const WorldModel w{{{{2.0, 1.0}, 0.1}, {{1.5, 1.0}, 0.1}}};
  EXPECT_NEAR(*echo_distance(w, SweepConfig{}, 0.0), 0.4, 1e-12);
}

TEST(Echo, ConeCatchesOffAxisDisc) {
  SweepConfig cfg;
  cfg.beam_halfwidth_deg = 10.0;
  const Position c = polar_to_cartesian(cfg.origin, 8.0, 1.0);
  const WorldModel w{{{c, 0.05}}};
  EXPECT_FALSE(echo_distance(w, SweepConfig{}, 0.0).has_value());
  EXPECT_NEAR(*echo_distance(w, cfg, 0.0), 0.95, 1e-9);
}

TEST(TimeOfFlight, RoundTrip) {
  EXPECT_EQ(time_of_flight(0.0, 343.0), 0.0);
  EXPECT_NEAR(time_of_flight(1.0, 343.0), 5.8309e-3, 1e-7);
  EXPECT_NEAR(time_of_flight(4.0, 343.0), 23.324e-3, 1e-6);
  EXPECT_CODE(time_of_flight(1.0, 0.0), ErrorCode::kNonPositiveSpeed);
  EXPECT_CODE(time_of_flight(1.0, -343.0), ErrorCode::kNonPositiveSpeed);
}

TEST(Sweep, EmptyWorldFullCircle) {
  const Scan s = sweep({}, SweepConfig{}, 0.0, 359.0);
  EXPECT_EQ(s.samples.size(), 360u);
  EXPECT_EQ(s.direction, 1);
  for (const auto& smp : s.samples) EXPECT_FALSE(smp.distance_m);
}

TEST(Sweep, ReverseHasSameSamplesReversed) {
  const WorldModel w{{{{1.6, 1.2}, 0.15}}};
  const Scan fwd = sweep(w, SweepConfig{}, 0.0, 359.0);
  const Scan back = sweep(w, SweepConfig{}, 359.0, 0.0);
  EXPECT_EQ(back.direction, -1);
  ASSERT_EQ(fwd.samples.size(), back.samples.size());
  for (std::size_t i = 0; i < fwd.samples.size(); ++i) {
    const auto& a = fwd.samples[i];
    const auto& b = back.samples[back.samples.size() - 1 - i];
    EXPECT_DOUBLE_EQ(a.angle_deg, b.angle_deg);
    EXPECT_EQ(a.distance_m, b.distance_m);
  }
}

TEST(Sweep, DiscDeadEastHitsAroundZero) {
  const WorldModel w{{{{1.8, 1.0}, 0.1}}};
  const Scan s = sweep(w, SweepConfig{}, 0.0, 359.0);
  for (const auto& smp : s.samples) {
    const bool hit = smp.distance_m.has_value();
    const double a = smp.angle_deg > 180 ? smp.angle_deg - 360 : smp.angle_deg;
    // half-angle subtended by the disc: asin(0.1/0.8) ~ 7.18 deg
    EXPECT_EQ(hit, std::abs(a) <= 7.0) << smp.angle_deg;
  }
}

TEST(Polar, Examples) {
  const Position a = polar_to_cartesian({1, 1}, 0.0, 0.5);
  EXPECT_NEAR(a.x, 1.5, 1e-12);
  EXPECT_NEAR(a.y, 1.0, 1e-12);
  const Position b = polar_to_cartesian({1, 1}, 90.0, 0.5);
  EXPECT_NEAR(b.x, 1.0, 1e-12);
  EXPECT_NEAR(b.y, 1.5, 1e-12);
  const Position c = polar_to_cartesian({1, 1}, 45.0, 1.0);
  EXPECT_NEAR(c.x, 1.70711, 1e-5);
  EXPECT_NEAR(c.y, 1.70711, 1e-5);
}

TEST(Detect, NothingInEmptyScan) {
  EXPECT_TRUE(detect_targets(sweep({}, SweepConfig{}, 0.0, 359.0), SweepConfig{}).empty());
}

TEST(Detect, OneDiscNearFace) {
  const SweepConfig cfg;
  const Disc d{{1.9, 1.4}, 0.15};
  const auto targets = detect_targets(sweep({{d}}, cfg, 0.0, 359.0), cfg);
  ASSERT_EQ(targets.size(), 1u);
  const double dc = distance(cfg.origin, d.center);
  const Position face{cfg.origin.x + (d.center.x - cfg.origin.x) * (dc - d.radius_m) / dc,
                      cfg.origin.y + (d.center.y - cfg.origin.y) * (dc - d.radius_m) / dc};
  EXPECT_LT(distance(targets[0].centroid, face), 0.05);
  EXPECT_GE(targets[0].sample_count, 1);
}

TEST(Detect, TwoDiscsQuarterTurnApart) {
  const SweepConfig cfg;
  const WorldModel w{{{{1.8, 1.0}, 0.15}, {{1.0, 1.8}, 0.15}}};
  const auto targets = detect_targets(sweep(w, cfg, 0.0, 359.0), cfg);
  ASSERT_EQ(targets.size(), 2u);
  EXPECT_LT(targets[0].angle_deg, targets[1].angle_deg);
}

TEST(Detect, DiscAcrossZeroIsOneTarget) {
  const SweepConfig cfg;
  const WorldModel w{{{{1.8, 1.0}, 0.15}}};
  EXPECT_EQ(detect_targets(sweep(w, cfg, 0.0, 359.0), cfg).size(), 1u);
  EXPECT_EQ(detect_targets(sweep(w, cfg, 359.0, 0.0), cfg).size(), 1u);
}

TEST(Frame, Format) {
  EXPECT_EQ(encode_frame(90.0, 1.234), "90,1234.\n");
  EXPECT_EQ(encode_frame(0.0, std::nullopt), "0,0.\n");
  EXPECT_CODE(encode_frame(360.0, 1.0), ErrorCode::kAngleOutOfRange);
  EXPECT_CODE(encode_frame(-1.0, 1.0), ErrorCode::kAngleOutOfRange);
}

TEST(Render, EmptyScanDrawsBoundaryAndRay) {
  const std::string svg = render_svg(sweep({}, SweepConfig{}, 0.0, 359.0), {}, SweepConfig{});
  EXPECT_EQ(count_of(svg, "class=\"terrain\""), 1);
  EXPECT_EQ(count_of(svg, "class=\"ray\""), 1);
  EXPECT_EQ(count_of(svg, "class=\"echo\""), 0);
}

TEST(Render, OneMarkPerEchoAndDeterministic) {
  const SweepConfig cfg;
  const Scan s = sweep({{{{1.6, 0.5}, 0.2}}}, cfg, 0.0, 359.0);
  const auto targets = detect_targets(s, cfg);
  ASSERT_EQ(targets.size(), 1u);
  const auto dir = std::filesystem::temp_directory_path() / "cargoswarm_render_test";
  std::filesystem::create_directories(dir);
  render_frame(s, {}, cfg, dir / "a.svg");
  render_frame(s, {}, cfg, dir / "b.svg");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(dir / "a.svg");
  EXPECT_EQ(a, slurp(dir / "b.svg"));
  EXPECT_EQ(count_of(a, "class=\"echo\""), targets[0].sample_count);
  EXPECT_CODE(render_frame(s, {}, cfg, dir / "missing" / "x.svg"), ErrorCode::kIoFailure);
  std::filesystem::remove_all(dir);
}

TEST(SweepConfig, Validation) {
  SweepConfig c;
  c.step_deg = 0;
  EXPECT_CODE(c.validate(), ErrorCode::kInvalidArgument);
  c = {};
  c.beam_halfwidth_deg = 20;
  EXPECT_CODE(c.validate(), ErrorCode::kInvalidArgument);
  c = {};
  c.speed_of_sound_m_s = 0;
  EXPECT_CODE(c.validate(), ErrorCode::kNonPositiveSpeed);
}

// every narrow-beam echo lands on the near boundary of an obstacle and
// agrees with the independent ray/disc intersection
TEST(RadarProperty, EchoLiesOnDiscBoundary) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  std::uniform_real_distribution<double> rad(0.05, 0.3);
  const SweepConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    WorldModel w;
    for (int k = 0; k < 3; ++k) {
      Disc d{{pos(rng), pos(rng)}, rad(rng)};
      if (distance(d.center, cfg.origin) <= d.radius_m + 0.01) continue;
      w.obstacles.push_back(d);
    }
    for (const auto& smp : sweep(w, cfg, 0.0, 359.0).samples) {
      std::optional<double> want;
      for (const auto& d : w.obstacles) {
        auto t = oracle::ray_disc(cfg.origin.x, cfg.origin.y, smp.angle_deg, d.center.x, d.center.y, d.radius_m);
        if (t && *t <= cfg.max_range_m && (!want || *t < *want)) want = t;
      }
      ASSERT_EQ(smp.distance_m.has_value(), want.has_value()) << smp.angle_deg;
      if (!want) continue;
      EXPECT_NEAR(*smp.distance_m, *want, 1e-9);
      EXPECT_LE(*smp.distance_m, cfg.max_range_m);
      const Position p = polar_to_cartesian(cfg.origin, smp.angle_deg, *smp.distance_m);
      bool on_boundary = false;
      for (const auto& d : w.obstacles) on_boundary |= std::abs(distance(p, d.center) - d.radius_m) < 1e-6;
      EXPECT_TRUE(on_boundary);
    }
  }
}

TEST(RadarProperty, TimeOfFlightInverts) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(0.001, 4.0);
  std::uniform_real_distribution<double> speed(300.0, 360.0);
  for (int i = 0; i < 1000; ++i) {
    const double d = dist(rng);
    const double v = speed(rng);
    EXPECT_NEAR(v * time_of_flight(d, v) / 2.0, d, 1e-9 * d);
  }
}

}  // namespace
