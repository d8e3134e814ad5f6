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

#include "ghzforge/elements.hpp"

#include <cmath>
#include <string>

#include "ghzforge/error.hpp"

namespace ghzforge {

namespace {

using ModeImage = std::vector<std::pair<Mode, Amplitude>>;

double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

double occupation_weight(const FockTerm &t) {
    double w = 1;
    for (const auto &o : t.occupations()) {
        w *= factorial(o.count);
    }
    return w;
}

/// Applies a single-photon linear map to every photon whose mode satisfies
/// `touched`, expanding products of creation operators. The output amplitude
/// of ket |k> from input |n> is sum(prod U) * sqrt(prod k!) / sqrt(prod n!).
template <typename Touched, typename Image>
PhotonicState apply_mode_map(const PhotonicState &s, Touched touched, Image image) {
    StateBuilder builder;
    builder.reserve(s.size() * 2);
    std::vector<std::pair<std::vector<Mode>, Amplitude>> partial;
    std::vector<std::pair<std::vector<Mode>, Amplitude>> next;
    for (const auto &[term, amp] : s.terms()) {
        std::vector<Occupation> fixed;
        std::vector<Mode> moving;
        for (const auto &o : term.occupations()) {
            if (touched(o.mode)) {
                moving.insert(moving.end(), static_cast<std::size_t>(o.count), o.mode);
            } else {
                fixed.push_back(o);
            }
        }
        if (moving.empty()) {
            builder.add(term, amp);
            continue;
        }
        partial.assign(1, {{}, Amplitude{1.0}});
        for (const Mode &m : moving) {
            next.clear();
            const ModeImage img = image(m);
            for (const auto &[modes, coeff] : partial) {
                for (const auto &[out, c] : img) {
                    auto extended = modes;
                    extended.push_back(out);
                    next.emplace_back(std::move(extended), coeff * c);
                }
            }
            partial.swap(next);
        }
        const double in_weight = occupation_weight(term);
        for (auto &[modes, coeff] : partial) {
            std::vector<Occupation> occ = fixed;
            for (const Mode &m : modes) {
                occ.push_back({m, 1});
            }
            FockTerm out = FockTerm::from_occupations(std::move(occ));
            const double factor = std::sqrt(occupation_weight(out) / in_weight);
            builder.add(std::move(out), amp * coeff * factor);
        }
    }
    auto result = std::move(builder).build(s.branch_prob());
    if (!result) {
        throw Error(ErrorCode::EmptyState, "element annihilated the state");
    }
    return *std::move(result);
}

void require_distinct(std::initializer_list<int> ports, const char *what) {
    for (auto i = ports.begin(); i != ports.end(); ++i) {
        if (*i < 0) {
            throw Error(ErrorCode::InvalidParameters, std::string(what) + ": negative port");
        }
        for (auto j = std::next(i); j != ports.end(); ++j) {
            if (*i == *j) {
                throw Error(ErrorCode::PortCollision,
                            std::string(what) + ": port " + std::to_string(*i) + " used twice");
            }
        }
    }
}

void require_finite(double x, const char *what) {
    if (!std::isfinite(x)) {
        throw Error(ErrorCode::InvalidParameters, std::string(what) + ": angle must be finite");
    }
}

}  // namespace

PhotonicState apply_pbs(const PhotonicState &s, int port_a, int port_b, Polarization reflected) {
    require_distinct({port_a, port_b}, "pbs");
    return apply_mode_map(
        s, [&](const Mode &m) { return m.port == port_a || m.port == port_b; },
        [&](const Mode &m) -> ModeImage {
            if (m.pol != reflected) {
                return {{m, 1.0}};
            }
            return {{Mode{m.port == port_a ? port_b : port_a, m.pol}, 1.0}};
        });
}

PhotonicState apply_hwp(const PhotonicState &s, int port, double theta) {
    require_finite(theta, "hwp");
    const double c = std::cos(2 * theta);
    const double sn = std::sin(2 * theta);
    const Mode h{port, Polarization::H};
    const Mode v{port, Polarization::V};
    return apply_mode_map(
        s, [&](const Mode &m) { return m.port == port; },
        [&](const Mode &m) -> ModeImage {
            if (m.pol == Polarization::H) {
                return {{h, c}, {v, sn}};
            }
            return {{h, sn}, {v, -c}};
        });
}

PhotonicState apply_phase(const PhotonicState &s, int port, double phi) {
    require_finite(phi, "phase");
    auto out = transform_terms(
        s,
        [&](const FockTerm &t) -> std::optional<std::pair<FockTerm, Amplitude>> {
            const int k = t.count_in_port(port);
            return std::pair{t, k == 0 ? Amplitude{1.0} : std::polar(1.0, k * phi)};
        },
        s.branch_prob());
    return *std::move(out);
}

PhotonicState apply_bd_merge(const PhotonicState &s, int port_even, int port_odd, int port_out) {
    require_distinct({port_even, port_odd, port_out}, "bd_merge");
    if (s.occupies(port_out)) {
        throw Error(ErrorCode::PortCollision, "bd_merge output port " + std::to_string(port_out) + " is occupied");
    }
    for (Polarization pol : {Polarization::H, Polarization::V}) {
        if (s.occupies(Mode{port_even, pol}) && s.occupies(Mode{port_odd, pol})) {
            throw Error(ErrorCode::BDCollision, std::string("bd_merge: both inputs carry ") + polarization_char(pol));
        }
    }
    return apply_mode_map(
        s, [&](const Mode &m) { return m.port == port_even || m.port == port_odd; },
        [&](const Mode &m) -> ModeImage { return {{Mode{port_out, m.pol}, 1.0}}; });
}

PhotonicState apply_bd_split(const PhotonicState &s, int port_in, int port_even, int port_odd) {
    require_distinct({port_in, port_even, port_odd}, "bd_split");
    if (s.occupies(port_even) || s.occupies(port_odd)) {
        throw Error(ErrorCode::PortCollision, "bd_split destination is occupied");
    }
    return apply_mode_map(
        s, [&](const Mode &m) { return m.port == port_in; },
        [&](const Mode &m) -> ModeImage {
            return {{Mode{m.pol == Polarization::H ? port_even : port_odd, m.pol}, 1.0}};
        });
}

PhotonicState apply(const PhotonicState &s, const Element &element) {
    return std::visit(
        [&](const auto &e) -> PhotonicState {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Pbs>) {
                return apply_pbs(s, e.port_a, e.port_b, e.reflected);
            } else if constexpr (std::is_same_v<T, Hwp>) {
                return apply_hwp(s, e.port, e.theta);
            } else if constexpr (std::is_same_v<T, PhaseShift>) {
                return apply_phase(s, e.port, e.phi);
            } else if constexpr (std::is_same_v<T, BdMerge>) {
                return apply_bd_merge(s, e.port_even, e.port_odd, e.port_out);
            } else {
                return apply_bd_split(s, e.port_in, e.port_even, e.port_odd);
            }
        },
        element);
}

std::vector<int> element_ports(const Element &element) {
    return std::visit(
        [](const auto &e) -> std::vector<int> {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Pbs>) {
                return {e.port_a, e.port_b};
            } else if constexpr (std::is_same_v<T, Hwp> || std::is_same_v<T, PhaseShift>) {
                return {e.port};
            } else if constexpr (std::is_same_v<T, BdMerge>) {
                return {e.port_even, e.port_odd, e.port_out};
            } else {
                return {e.port_in, e.port_even, e.port_odd};
            }
        },
        element);
}

}  // namespace ghzforge
