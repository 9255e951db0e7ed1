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

// Per-tick separation checks shared by the sim tests and the acceptance run.
#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cargoswarm/sim.hpp"

namespace audit {

struct Separation {
  long long ticks = 0;
  long long node_clashes = 0;
  long long near_misses = 0;
  double min_distance_m = 1e9;
  std::string first_problem;
};

// Observer body: no two vehicles snap to the same node, and no pair closer
// than half a node pitch.
inline void check(const cargoswarm::Simulation& sim, Separation& out) {
  ++out.ticks;
  const auto& vs = sim.vehicles();
  const double spacing = sim.scenario().terrain.spacing_m;
  std::map<cargoswarm::NodeId, int> seen;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& p = vs[i].pose();
    const cargoswarm::NodeId n = sim.grid().position_to_nearest_node({p.x, p.y});
    auto [it, fresh] = seen.emplace(n, vs[i].id());
    if (!fresh) {
      ++out.node_clashes;
      if (out.first_problem.empty()) {
        std::ostringstream s;
        s << "tick " << sim.now() << ": vehicles " << it->second << " and " << vs[i].id() << " share node ("
          << n.ix << "," << n.iy << ")";
        out.first_problem = s.str();
      }
    }
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      const auto& q = vs[j].pose();
      const double d = std::hypot(p.x - q.x, p.y - q.y);
      out.min_distance_m = std::min(out.min_distance_m, d);
      if (d < 0.5 * spacing - 1e-9) {
        ++out.near_misses;
        if (out.first_problem.empty()) {
          std::ostringstream s;
          s << "tick " << sim.now() << ": vehicles " << vs[i].id() << " and " << vs[j].id() << " " << d
            << " m apart";
          out.first_problem = s.str();
        }
      }
    }
  }
}

}  // namespace audit
