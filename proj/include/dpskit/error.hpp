// Copyright 2026 The dpskit Authors
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

namespace dpskit {

enum class ErrorCode {
    NonHermitian,
    NonSquare,
    NonUnitTrace,
    NotPSD,
    DimensionMismatch,
    InvalidDimension,
    InvalidArgument,
    UndefinedForDim2,
    PolarizationOutOfRange,
    NonUnitVector,
    InequalityViolation,
    RequiresDALeDB,
    NotDPS,
    AmbiguousAtPZero,
    InvalidSchmidtVector,
    FOutOfRange,
    NotTracePreserving,
    UnsupportedDimension,
    DimensionTooLarge,
    InconsistentMoments,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonHermitian: return "NonHermitian";
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::NonUnitTrace: return "NonUnitTrace";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidDimension: return "InvalidDimension";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UndefinedForDim2: return "UndefinedForDim2";
        case ErrorCode::PolarizationOutOfRange: return "PolarizationOutOfRange";
        case ErrorCode::NonUnitVector: return "NonUnitVector";
        case ErrorCode::InequalityViolation: return "InequalityViolation";
        case ErrorCode::RequiresDALeDB: return "RequiresDALeDB";
        case ErrorCode::NotDPS: return "NotDPS";
        case ErrorCode::AmbiguousAtPZero: return "AmbiguousAtPZero";
        case ErrorCode::InvalidSchmidtVector: return "InvalidSchmidtVector";
        case ErrorCode::FOutOfRange: return "FOutOfRange";
        case ErrorCode::NotTracePreserving: return "NotTracePreserving";
        case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
        case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorCode::InconsistentMoments: return "InconsistentMoments";
    }
    return "Unknown";
}

/// Every precondition failure in the library is reported as an Error carrying
/// a machine-readable code; the message names the violated check.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace dpskit
