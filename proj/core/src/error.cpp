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

#include "cargoswarm/error.hpp"

namespace cargoswarm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveDimension: return "NonPositiveDimension";
    case ErrorCode::kSpacingTooLarge: return "SpacingTooLarge";
    case ErrorCode::kNodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::kOutOfTerrain: return "OutOfTerrain";
    case ErrorCode::kNoPath: return "NoPath";
    case ErrorCode::kGridTooLarge: return "GridTooLarge";
    case ErrorCode::kBadInterval: return "BadInterval";
    case ErrorCode::kEmptyMemory: return "EmptyMemory";
    case ErrorCode::kNonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::kAngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::kVehicleLimitExceeded: return "VehicleLimitExceeded";
    case ErrorCode::kPayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::kBadSync: return "BadSync";
    case ErrorCode::kBadVersion: return "BadVersion";
    case ErrorCode::kBadLength: return "BadLength";
    case ErrorCode::kCrcMismatch: return "CrcMismatch";
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kIllegalTransition: return "IllegalTransition";
    case ErrorCode::kTimestepTooLarge: return "TimestepTooLarge";
    case ErrorCode::kUnknownVehicle: return "UnknownVehicle";
    case ErrorCode::kEmptyLog: return "EmptyLog";
    case ErrorCode::kScenarioInvalid: return "ScenarioInvalid";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace cargoswarm
