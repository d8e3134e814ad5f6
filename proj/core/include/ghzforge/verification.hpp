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

#ifndef GHZFORGE_VERIFICATION_HPP
#define GHZFORGE_VERIFICATION_HPP

#include <string>
#include <vector>

#include "ghzforge/state.hpp"

namespace ghzforge {

struct VerifyOptions {
    /// Fault injection: the PBS reflection convention used by the golden runs.
    Polarization pbs_reflected = Polarization::V;
    /// Upper d for the exact formula identities.
    int identity_max_d = 128;
};

struct AnchorResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<AnchorResult> anchors;

    bool all_passed() const;
    std::vector<std::string> failed() const;
};

/// Golden regression anchors: the d = 3, n = 4 walkthrough (stage
/// probabilities, intermediate states, analysis distribution, totals), the
/// two-dimensional pipeline and the exact resource identities.
VerificationReport run_verification(const VerifyOptions &opts = {});

}  // namespace ghzforge

#endif
