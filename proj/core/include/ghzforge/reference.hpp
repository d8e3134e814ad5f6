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

#ifndef GHZFORGE_REFERENCE_HPP
#define GHZFORGE_REFERENCE_HPP

#include <span>

#include "ghzforge/state.hpp"

namespace ghzforge {

/// Standard path encoding: photon p in path v occupies port p*d + v.
constexpr int path_port(int photon, int path, int d) noexcept {
    return photon * d + path;
}

/// Ket with photon p in path values[p], all H.
FockTerm path_ket(std::span<const int> values, int d);

/// (1/sqrt d) sum_i |i>^{(x) n} in the standard path encoding, H polarized.
PhotonicState ghz_reference(int d, int n);

/// |<ref|normalize(s)>|^2 with `ref` normalized as well; 0 for a missing state.
double fidelity(const PhotonicState &s, const PhotonicState &ref);
double fidelity(const std::optional<PhotonicState> &s, const PhotonicState &ref);

}  // namespace ghzforge

#endif
