// Copyright 2026 The ghzforge Authors
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

#include "ghzforge/error.hpp"

#include <atomic>
#include <cmath>

#include "ghzforge/tolerance.hpp"

namespace ghzforge {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyState:
            return "EmptyState";
        case ErrorCode::NormOutOfRange:
            return "NormOutOfRange";
        case ErrorCode::PortCollision:
            return "PortCollision";
        case ErrorCode::BDCollision:
            return "BDCollision";
        case ErrorCode::PolarizationConflict:
            return "PolarizationConflict";
        case ErrorCode::NotSingleOccupancy:
            return "NotSingleOccupancy";
        case ErrorCode::MissingCorrection:
            return "MissingCorrection";
        case ErrorCode::IncoherentBranches:
            return "IncoherentBranches";
        case ErrorCode::InvalidCoefficients:
            return "InvalidCoefficients";
        case ErrorCode::InvalidAuxPair:
            return "InvalidAuxPair";
        case ErrorCode::InvalidParameters:
            return "InvalidParameters";
        case ErrorCode::InvalidCircuit:
            return "InvalidCircuit";
        case ErrorCode::OracleTooLarge:
            return "OracleTooLarge";
        case ErrorCode::ParseError:
            return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

namespace {
std::atomic<double> g_tolerance{kDefaultTolerance};
}

double tolerance() noexcept {
    return g_tolerance.load(std::memory_order_relaxed);
}

void set_tolerance(double eps) {
    if (!std::isfinite(eps) || eps <= 0 || eps >= 1) {
        throw Error(ErrorCode::InvalidParameters, "tolerance must lie in (0, 1)");
    }
    g_tolerance.store(eps, std::memory_order_relaxed);
}

ScopedTolerance::ScopedTolerance(double eps) : previous_(tolerance()) {
    set_tolerance(eps);
}

ScopedTolerance::~ScopedTolerance() {
    g_tolerance.store(previous_, std::memory_order_relaxed);
}

}  // namespace ghzforge
