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

#include <unordered_map>
#include <vector>

#include "cargoswarm/grid.hpp"
#include "cargoswarm/planner.hpp"
#include "cargoswarm/reservation.hpp"

namespace cargoswarm {

/// Per-vehicle record of the nodes entered since the last retrace.
class PathMemory {
 public:
  void record(VehicleId vehicle, const NodeId& node) { table_[vehicle].push_back(node); }

  /// Empty when nothing is recorded.
  const std::vector<NodeId>& sequence(VehicleId vehicle) const;

  /// Recorded sequence reversed; clears the vehicle's memory.
  /// Throws kEmptyMemory if nothing is recorded.
  Path retrace(VehicleId vehicle);

  void clear(VehicleId vehicle) { table_.erase(vehicle); }

 private:
  std::unordered_map<VehicleId, std::vector<NodeId>> table_;
};

}  // namespace cargoswarm
