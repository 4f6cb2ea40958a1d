// Copyright 2026 The conga Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conga {

enum class ErrorCode {
  kNegativeLoad,
  kNegativeCoefficient,
  kNegativeCost,
  kInvalidGraph,
  kInvalidGame,
  kPathExplosion,
  kProfileExplosion,
  kStepLimitExceeded,
  kConservationViolated,
  kDecompositionResidual,
  kUnknownNode,
  kInvalidSpeed,
  kOptimumIsZero,
  kUnknownEdgeAnnotation,
  kSyntaxError,
  kSchemaError,
  kValidationError,
  kIoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNegativeLoad: return "NegativeLoad";
    case ErrorCode::kNegativeCoefficient: return "NegativeCoefficient";
    case ErrorCode::kNegativeCost: return "NegativeCost";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kInvalidGame: return "InvalidGame";
    case ErrorCode::kPathExplosion: return "PathExplosion";
    case ErrorCode::kProfileExplosion: return "ProfileExplosion";
    case ErrorCode::kStepLimitExceeded: return "StepLimitExceeded";
    case ErrorCode::kConservationViolated: return "ConservationViolated";
    case ErrorCode::kDecompositionResidual: return "DecompositionResidual";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kInvalidSpeed: return "InvalidSpeed";
    case ErrorCode::kOptimumIsZero: return "OptimumIsZero";
    case ErrorCode::kUnknownEdgeAnnotation: return "UnknownEdgeAnnotation";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The code is
/// stable and machine-checkable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace conga
