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

#include "ghzforge/reference.hpp"

#include <algorithm>
#include <cmath>

#include "ghzforge/error.hpp"
#include "ghzforge/formulas.hpp"

namespace ghzforge {

FockTerm path_ket(std::span<const int> values, int d) {
    std::vector<Mode> modes;
    modes.reserve(values.size());
    for (std::size_t p = 0; p < values.size(); ++p) {
        if (values[p] < 0 || values[p] >= d) {
            throw Error(ErrorCode::InvalidParameters, "path value out of range");
        }
        modes.push_back({path_port(static_cast<int>(p), values[p], d), Polarization::H});
    }
    return FockTerm::from_modes(std::move(modes));
}

PhotonicState ghz_reference(int d, int n) {
    require_valid_parameters(d, n);
    std::vector<Ket> kets;
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        std::vector<int> values(static_cast<std::size_t>(n), i);
        kets.push_back({path_ket(values, d), amp});
    }
    return make_state(kets);
}

double fidelity(const PhotonicState &s, const PhotonicState &ref) {
    const double ns = s.norm2();
    const double nr = ref.norm2();
    if (ns <= 0 || nr <= 0) {
        return 0.0;
    }
    return std::clamp(std::norm(inner_product(ref, s)) / (ns * nr), 0.0, 1.0);
}

double fidelity(const std::optional<PhotonicState> &s, const PhotonicState &ref) {
    return s ? fidelity(*s, ref) : 0.0;
}

}  // namespace ghzforge
