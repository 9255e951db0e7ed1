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

// cargoswarm: run, plan, scan, defaults

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cargoswarm/error.hpp"
#include "cargoswarm/planner.hpp"
#include "cargoswarm/radar.hpp"
#include "cargoswarm/scenario.hpp"
#include "cargoswarm/sim.hpp"

namespace cs = cargoswarm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIncomplete = 2;

cs::NodeId parse_node(const std::string& text) {
  int ix = 0;
  int iy = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d,%d%c", &ix, &iy, &tail) != 2)
    throw cs::Error(cs::ErrorCode::kInvalidArgument, "expected ix,iy but got '" + text + "'");
  return {ix, iy};
}

cs::Scenario scenario_from(const std::string& path) {
  return path.empty() ? cs::default_scenario() : cs::load_scenario(path);
}

void print_path(const cs::Path& p) {
  std::cout << "path";
  for (const auto& n : p.nodes) std::cout << ' ' << cs::to_string(n);
  std::cout << "\ncost " << p.cost << "\n";
}

int cmd_run(const std::string& scenario_path, const std::string& out, std::optional<std::uint64_t> seed,
            std::optional<long long> max_ticks) {
  cs::Scenario s = scenario_from(scenario_path);
  if (seed) s.medium.seed = *seed;
  if (max_ticks) s.sim.max_ticks = *max_ticks;
  cs::Simulation sim(std::move(s));
  const cs::SimReport r = sim.run(out);
  std::cout << "completed " << r.completed_jobs << "/" << r.total_jobs << " jobs\n"
            << "makespan_ticks " << r.makespan_ticks << "\n"
            << "ticks_run " << r.ticks_run << "\n";
  for (const auto& a : r.artifacts) std::cerr << "wrote " << a.string() << "\n";
  return r.all_complete ? kExitOk : kExitIncomplete;
}

int cmd_plan(const std::string& scenario_path, const std::string& algo, const std::string& from,
             const std::string& to) {
  const cs::Scenario s = scenario_from(scenario_path);
  const cs::GridMap grid = cs::build_grid(s);
  const cs::NodeId src = parse_node(from);
  const cs::NodeId dst = parse_node(to);
  for (const auto& n : {src, dst}) {
    if (!grid.contains(n)) throw cs::Error(cs::ErrorCode::kNodeOutOfRange, "node " + cs::to_string(n) + " outside grid");
  }
  if (algo == "dijkstra") {
    print_path(cs::dijkstra(grid, src, dst));
  } else if (algo == "astar") {
    print_path(cs::astar(grid, src, dst));
  } else if (algo == "bellman-ford") {
    print_path(cs::path_from_costs(grid, cs::bellman_ford(grid, src), src, dst));
  } else {
    const cs::AllPairs table = cs::floyd_warshall(grid);
    const auto d = table.distance(src, dst);
    if (!d) throw cs::Error(cs::ErrorCode::kNoPath, cs::to_string(dst) + " unreachable from " + cs::to_string(src));
    print_path(cs::path_from_costs(grid, cs::bellman_ford(grid, src), src, dst));
  }
  return kExitOk;
}

int cmd_scan(const std::string& scenario_path, const std::string& out) {
  const cs::Scenario s = scenario_from(scenario_path);
  cs::WorldModel world;
  world.obstacles = s.obstacles;
  const cs::GridMap grid = cs::build_grid(s);
  for (const auto& v : s.vehicles) world.obstacles.push_back({grid.node_to_position(v.home), s.sim.vehicle_radius_m});

  const double last = 360.0 - s.sensor.step_deg;
  const cs::Scan scan = cs::sweep(world, s.sensor, 0.0, last);
  std::string stream;
  for (const auto& smp : scan.samples) stream += cs::encode_frame(smp.angle_deg, smp.distance_m);

  std::filesystem::create_directories(out);
  const auto frames = std::filesystem::path(out) / "radar_frames.txt";
  std::ofstream f(frames, std::ios::binary | std::ios::trunc);
  if (!f || !(f << stream)) throw cs::Error(cs::ErrorCode::kIoFailure, "cannot write " + frames.string());
  cs::render_frame(scan, {s.terrain.width_m, s.terrain.height_m}, s.sensor, std::filesystem::path(out) / "scan.svg");

  const auto targets = cs::detect_targets(scan, s.sensor);
  std::cerr << "samples " << scan.samples.size() << "\ntargets " << targets.size() << "\n";
  for (const auto& t : targets) {
    char line[128];
    std::snprintf(line, sizeof line, "target x=%.3f y=%.3f bearing=%.1f range=%.3f\n", t.centroid.x, t.centroid.y,
                  t.angle_deg, t.distance_m);
    std::cerr << line;
  }
  return kExitOk;
}

int cmd_defaults(const std::string& out) {
  const std::string text = cs::to_json(cs::default_scenario());
  if (out.empty() || out == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text)) throw cs::Error(cs::ErrorCode::kIoFailure, "cannot write " + out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cargoswarm: hub-coordinated cargo vehicle swarm simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<long long> max_ticks;
  auto* run = app.add_subcommand("run", "simulate a scenario and write artifacts");
  run->add_option("--scenario", scenario, "scenario JSON (default: built-in prototype scenario)");
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--seed", seed, "override the radio loss seed");
  run->add_option("--max-ticks", max_ticks, "override the tick budget");

  std::string algo = "dijkstra";
  std::string from;
  std::string to;
  auto* plan = app.add_subcommand("plan", "shortest path on the scenario grid");
  plan->add_option("--scenario", scenario, "scenario JSON (default: built-in prototype scenario)");
  plan->add_option("--algo", algo, "dijkstra | astar | bellman-ford | floyd-warshall")
      ->check(CLI::IsMember({"dijkstra", "astar", "bellman-ford", "floyd-warshall"}));
  plan->add_option("--from", from, "source node ix,iy")->required();
  plan->add_option("--to", to, "destination node ix,iy")->required();

  auto* scan = app.add_subcommand("scan", "one radar sweep over the static world");
  scan->add_option("--scenario", scenario, "scenario JSON (default: built-in prototype scenario)");
  scan->add_option("--out", out, "output directory")->required();

  auto* defaults = app.add_subcommand("defaults", "write the prototype scenario");
  defaults->add_option("--out", out, "output file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run) return cmd_run(scenario, out, seed, max_ticks);
    if (*plan) return cmd_plan(scenario, algo, from, to);
    if (*scan) return cmd_scan(scenario, out);
    if (*defaults) return cmd_defaults(out);
  } catch (const cs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == cs::ErrorCode::kNoPath ? kExitIncomplete : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
