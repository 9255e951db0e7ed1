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

#include "cargoswarm/path_memory.hpp"

#include <algorithm>

#include "cargoswarm/error.hpp"

namespace cargoswarm {

const std::vector<NodeId>& PathMemory::sequence(VehicleId vehicle) const {
  static const std::vector<NodeId> kEmpty;
  auto it = table_.find(vehicle);
  return it == table_.end() ? kEmpty : it->second;
}

Path PathMemory::retrace(VehicleId vehicle) {
  auto it = table_.find(vehicle);
  if (it == table_.end() || it->second.empty()) {
    throw Error(ErrorCode::kEmptyMemory, "no recorded path for vehicle " + std::to_string(vehicle));
  }
  Path path;
  path.nodes.assign(it->second.rbegin(), it->second.rend());
  path.cost = static_cast<int>(path.nodes.size()) - 1;
  table_.erase(it);
  return path;
}

}  // namespace cargoswarm
