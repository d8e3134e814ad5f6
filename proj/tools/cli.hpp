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

#ifndef GHZFORGE_TOOLS_CLI_HPP
#define GHZFORGE_TOOLS_CLI_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ghzforge::cli {

enum ExitCode : int {
    kOk = 0,
    kMismatch = 1,
    kUsage = 2,
    kRuntime = 3,
};

/// Largest cells a sweep will simulate; larger ones are reported as skipped.
inline constexpr int kSweepMaxD = 8;
inline constexpr int kSweepMaxN = 10;

/// Inclusive integer range from "a..b" or "a". b < a gives an empty range.
struct Range {
    int lo = 0;
    int hi = -1;
};
Range parse_range(const std::string &text);

/// Comma-separated reals.
std::vector<double> parse_coeffs(const std::string &text);

/// Entry point behind the executable. `args` excludes the program name.
/// `eps` is the raw GHZFORGE_EPS value, if set.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            const std::optional<std::string> &eps = std::nullopt);

}  // namespace ghzforge::cli

#endif
