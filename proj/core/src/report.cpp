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

#include "ghzforge/report.hpp"

#include <cmath>

#include "ghzforge/error.hpp"

namespace ghzforge {

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::Rule:
            return "rule";
        case Backend::Element:
            return "element";
        case Backend::Oracle:
            return "oracle";
    }
    return "?";
}

Backend parse_backend(std::string_view name) {
    for (Backend b : {Backend::Rule, Backend::Element, Backend::Oracle}) {
        if (backend_name(b) == name) {
            return b;
        }
    }
    throw Error(ErrorCode::InvalidParameters, "unknown backend '" + std::string(name) + "'");
}

std::string_view odd_mode_name(OddMode m) {
    return m == OddMode::SingleOutcome ? "single" : "fourier";
}

OddMode parse_odd_mode(std::string_view name) {
    if (name == "single") {
        return OddMode::SingleOutcome;
    }
    if (name == "fourier") {
        return OddMode::FullFourier;
    }
    throw Error(ErrorCode::InvalidParameters, "unknown odd mode '" + std::string(name) + "'");
}

bool RunReport::probability_ok() const {
    if (!predicted) {
        return true;
    }
    return std::abs(probability - to_double(*predicted)) <= kReportProbabilityThreshold;
}

}  // namespace ghzforge
