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

#ifndef GHZFORGE_ELEMENTS_HPP
#define GHZFORGE_ELEMENTS_HPP

#include <variant>

#include "ghzforge/state.hpp"

namespace ghzforge {

/// Polarizing beam splitter between two arms. The reflected polarization
/// swaps arms, the other one stays. No reflection phase.
struct Pbs {
    int port_a = 0;
    int port_b = 0;
    Polarization reflected = Polarization::V;
};

/// Half-wave plate with Jones matrix {{cos 2t, sin 2t}, {sin 2t, -cos 2t}}.
struct Hwp {
    int port = 0;
    double theta = 0;
};

/// Each photon in `port` picks up exp(i phi), either polarization.
struct PhaseShift {
    int port = 0;
    double phi = 0;
};

/// Beam displacer combining two beams into `port_out` without touching
/// polarization. Only valid while the inputs never share a polarization.
struct BdMerge {
    int port_even = 0;
    int port_odd = 0;
    int port_out = 0;
};

/// Beam displacer separating `port_in` by polarization: H to `port_even`,
/// V to `port_odd`.
struct BdSplit {
    int port_in = 0;
    int port_even = 0;
    int port_odd = 0;
};

using Element = std::variant<Pbs, Hwp, PhaseShift, BdMerge, BdSplit>;

PhotonicState apply_pbs(const PhotonicState &s, int port_a, int port_b,
                        Polarization reflected = Polarization::V);
PhotonicState apply_hwp(const PhotonicState &s, int port, double theta);
PhotonicState apply_phase(const PhotonicState &s, int port, double phi);
PhotonicState apply_bd_merge(const PhotonicState &s, int port_even, int port_odd, int port_out);
PhotonicState apply_bd_split(const PhotonicState &s, int port_in, int port_even, int port_odd);

PhotonicState apply(const PhotonicState &s, const Element &element);

/// Ports referenced by an element, in declaration order.
std::vector<int> element_ports(const Element &element);

}  // namespace ghzforge

#endif
