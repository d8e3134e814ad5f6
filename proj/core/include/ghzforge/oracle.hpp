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

#ifndef GHZFORGE_ORACLE_HPP
#define GHZFORGE_ORACLE_HPP

#include "ghzforge/protocol.hpp"
#include "ghzforge/report.hpp"

namespace ghzforge {

inline constexpr int kOracleMaxD = 4;
inline constexpr int kOracleMaxN = 6;

/// Brute-force reference for the protocol. Enumerates every source path
/// assignment and auxiliary branch as a dense amplitude table and applies each
/// stage as a keep/drop predicate plus amplitude factor. Shares no code with
/// the rule or element backends. Throws OracleTooLarge above the bounds.
RunReport oracle_run(const ProtocolOptions &opts);

}  // namespace ghzforge

#endif
