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

#include "ghzforge/state.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "ghzforge/error.hpp"
#include "ghzforge/tolerance.hpp"

namespace ghzforge {

char polarization_char(Polarization pol) noexcept {
    return pol == Polarization::H ? 'H' : 'V';
}

Polarization flipped(Polarization pol) noexcept {
    return pol == Polarization::H ? Polarization::V : Polarization::H;
}

FockTerm FockTerm::from_modes(std::vector<Mode> photons) {
    std::vector<Occupation> occ;
    occ.reserve(photons.size());
    for (const auto &m : photons) {
        occ.push_back({m, 1});
    }
    return from_occupations(std::move(occ));
}

FockTerm FockTerm::from_occupations(std::vector<Occupation> occupations) {
    for (const auto &o : occupations) {
        if (o.count < 1) {
            throw Error(ErrorCode::InvalidParameters, "occupation count must be >= 1");
        }
        if (o.mode.port < 0) {
            throw Error(ErrorCode::InvalidParameters, "port must be >= 0");
        }
    }
    std::sort(occupations.begin(), occupations.end(),
              [](const Occupation &a, const Occupation &b) { return a.mode < b.mode; });
    FockTerm t;
    t.occ_.reserve(occupations.size());
    for (const auto &o : occupations) {
        if (!t.occ_.empty() && t.occ_.back().mode == o.mode) {
            t.occ_.back().count += o.count;
        } else {
            t.occ_.push_back(o);
        }
    }
    return t;
}

int FockTerm::photon_count() const noexcept {
    int n = 0;
    for (const auto &o : occ_) {
        n += o.count;
    }
    return n;
}

int FockTerm::count(Mode mode) const noexcept {
    auto it = std::lower_bound(occ_.begin(), occ_.end(), mode,
                               [](const Occupation &o, const Mode &m) { return o.mode < m; });
    return (it != occ_.end() && it->mode == mode) ? it->count : 0;
}

int FockTerm::count_in_port(int port) const noexcept {
    return count({port, Polarization::H}) + count({port, Polarization::V});
}

int FockTerm::count_in_ports(std::span<const int> ports) const noexcept {
    int n = 0;
    for (int p : ports) {
        n += count_in_port(p);
    }
    return n;
}

std::vector<Mode> FockTerm::photons() const {
    std::vector<Mode> out;
    for (const auto &o : occ_) {
        out.insert(out.end(), static_cast<std::size_t>(o.count), o.mode);
    }
    return out;
}

FockTerm FockTerm::without(Mode mode) const {
    FockTerm t = *this;
    auto it = std::find_if(t.occ_.begin(), t.occ_.end(), [&](const Occupation &o) { return o.mode == mode; });
    if (it == t.occ_.end()) {
        throw Error(ErrorCode::InvalidParameters, "no photon to remove in requested mode");
    }
    if (--it->count == 0) {
        t.occ_.erase(it);
    }
    return t;
}

std::string FockTerm::to_string() const {
    std::ostringstream out;
    out << '|';
    bool first = true;
    for (const auto &o : occ_) {
        if (!first) {
            out << ' ';
        }
        first = false;
        out << o.mode.port << polarization_char(o.mode.pol);
        if (o.count > 1) {
            out << '^' << o.count;
        }
    }
    out << "⟩";
    return out.str();
}

PhotonicState PhotonicState::vacuum() {
    PhotonicState s;
    s.terms_.emplace_back(FockTerm{}, Amplitude{1.0, 0.0});
    return s;
}

double PhotonicState::norm2() const noexcept {
    double total = 0;
    for (const auto &[t, a] : terms_) {
        total += std::norm(a);
    }
    return total;
}

Amplitude PhotonicState::amplitude(const FockTerm &term) const noexcept {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                               [](const Term &x, const FockTerm &k) { return x.first < k; });
    return (it != terms_.end() && it->first == term) ? it->second : Amplitude{};
}

std::optional<int> PhotonicState::photon_number() const noexcept {
    std::optional<int> n;
    for (const auto &[t, a] : terms_) {
        int c = t.photon_count();
        if (n && *n != c) {
            return std::nullopt;
        }
        n = c;
    }
    return n;
}

std::vector<int> PhotonicState::occupied_ports() const {
    std::set<int> ports;
    for (const auto &[t, a] : terms_) {
        for (const auto &o : t.occupations()) {
            ports.insert(o.mode.port);
        }
    }
    return {ports.begin(), ports.end()};
}

bool PhotonicState::occupies(int port) const noexcept {
    for (const auto &[t, a] : terms_) {
        if (t.count_in_port(port) > 0) {
            return true;
        }
    }
    return false;
}

bool PhotonicState::occupies(Mode mode) const noexcept {
    for (const auto &[t, a] : terms_) {
        if (t.count(mode) > 0) {
            return true;
        }
    }
    return false;
}

PhotonicState PhotonicState::with_branch_prob(double branch_prob) const {
    PhotonicState s = *this;
    s.branch_prob_ = branch_prob;
    return s;
}

std::optional<PhotonicState> StateBuilder::build(double branch_prob) && {
    std::sort(pending_.begin(), pending_.end(),
              [](const PhotonicState::Term &a, const PhotonicState::Term &b) { return a.first < b.first; });
    // Pruning is relative to the largest contribution so that heavily
    // post-selected (tiny but unnormalized) branches keep their terms.
    double scale = 0;
    for (const auto &term : pending_) {
        scale = std::max(scale, std::abs(term.second));
    }
    const double eps = tolerance() * std::min(1.0, scale);
    PhotonicState s;
    s.branch_prob_ = branch_prob;
    s.terms_.reserve(pending_.size());
    for (auto &term : pending_) {
        if (!s.terms_.empty() && s.terms_.back().first == term.first) {
            s.terms_.back().second += term.second;
        } else {
            if (!s.terms_.empty() && std::abs(s.terms_.back().second) < eps) {
                s.terms_.pop_back();
            }
            s.terms_.push_back(std::move(term));
        }
    }
    if (!s.terms_.empty() && std::abs(s.terms_.back().second) < eps) {
        s.terms_.pop_back();
    }
    pending_.clear();
    if (s.terms_.empty()) {
        return std::nullopt;
    }
    return s;
}

PhotonicState make_state(std::span<const Ket> kets) {
    StateBuilder b;
    b.reserve(kets.size());
    for (const auto &k : kets) {
        if (!std::isfinite(k.amplitude.real()) || !std::isfinite(k.amplitude.imag())) {
            throw Error(ErrorCode::NormOutOfRange, "amplitude is not finite");
        }
        b.add(k.term, k.amplitude);
    }
    auto s = std::move(b).build();
    if (!s) {
        throw Error(ErrorCode::EmptyState, "all amplitudes cancel");
    }
    if (s->norm2() > 1 + tolerance()) {
        throw Error(ErrorCode::NormOutOfRange, "squared norm exceeds one");
    }
    return *std::move(s);
}

PhotonicState make_state(std::initializer_list<Ket> kets) {
    return make_state(std::span<const Ket>(kets.begin(), kets.size()));
}

PhotonicState tensor(const PhotonicState &a, const PhotonicState &b) {
    auto pa = a.occupied_ports();
    auto pb = b.occupied_ports();
    std::vector<int> common;
    std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(common));
    if (!common.empty()) {
        throw Error(ErrorCode::PortCollision, "tensor factors share port " + std::to_string(common.front()));
    }
    StateBuilder builder;
    builder.reserve(a.size() * b.size());
    for (const auto &[ta, aa] : a.terms()) {
        for (const auto &[tb, ab] : b.terms()) {
            std::vector<Occupation> occ(ta.occupations().begin(), ta.occupations().end());
            occ.insert(occ.end(), tb.occupations().begin(), tb.occupations().end());
            builder.add(FockTerm::from_occupations(std::move(occ)), aa * ab);
        }
    }
    auto s = std::move(builder).build(a.branch_prob() * b.branch_prob());
    if (!s) {
        throw Error(ErrorCode::EmptyState, "tensor product vanished");
    }
    return *std::move(s);
}

PhotonicState normalize(const PhotonicState &s) {
    double n = std::sqrt(s.norm2());
    if (!(n > 0) || !std::isfinite(1.0 / n)) {
        throw Error(ErrorCode::EmptyState, "cannot normalize a zero-norm state");
    }
    return scaled(s, 1.0 / n);
}

Amplitude inner_product(const PhotonicState &a, const PhotonicState &b) {
    // Both term lists are sorted, so a merge walk finds the common kets.
    Amplitude total{};
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            total += std::conj(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return total;
}

PhotonicState scaled(const PhotonicState &s, Amplitude factor) {
    StateBuilder b;
    b.reserve(s.size());
    for (const auto &[t, a] : s.terms()) {
        b.add(t, a * factor);
    }
    auto out = std::move(b).build(s.branch_prob());
    if (!out) {
        throw Error(ErrorCode::EmptyState, "scaling vanished every amplitude");
    }
    return *std::move(out);
}

PhotonicState relabel_ports(const PhotonicState &s, const std::function<int(int)> &rename) {
    auto ports = s.occupied_ports();
    std::set<int> images;
    for (int p : ports) {
        if (!images.insert(rename(p)).second) {
            throw Error(ErrorCode::PortCollision, "port relabeling is not injective");
        }
    }
    auto out = transform_terms(
        s,
        [&](const FockTerm &t) -> std::optional<std::pair<FockTerm, Amplitude>> {
            std::vector<Occupation> occ(t.occupations().begin(), t.occupations().end());
            for (auto &o : occ) {
                o.mode.port = rename(o.mode.port);
            }
            return std::pair{FockTerm::from_occupations(std::move(occ)), Amplitude{1.0}};
        },
        s.branch_prob());
    return *std::move(out);
}

std::optional<PhotonicState> transform_terms(
    const PhotonicState &s,
    const std::function<std::optional<std::pair<FockTerm, Amplitude>>(const FockTerm &)> &f,
    double branch_prob) {
    StateBuilder b;
    b.reserve(s.size());
    for (const auto &[t, a] : s.terms()) {
        if (auto mapped = f(t)) {
            b.add(std::move(mapped->first), a * mapped->second);
        }
    }
    return std::move(b).build(branch_prob);
}

bool approx_equal(const PhotonicState &a, const PhotonicState &b, double eps) {
    if (eps < 0) {
        eps = tolerance();
    }
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    auto ea = a.terms().end();
    auto eb = b.terms().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            if (std::abs(ia->second) > eps) {
                return false;
            }
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            if (std::abs(ib->second) > eps) {
                return false;
            }
            ++ib;
        } else {
            if (std::abs(ia->second - ib->second) > eps) {
                return false;
            }
            ++ia;
            ++ib;
        }
    }
    return true;
}

std::string to_string(const PhotonicState &s) {
    std::ostringstream out;
    out << std::setprecision(6);
    bool first = true;
    for (const auto &[t, a] : s.terms()) {
        if (!first) {
            out << " + ";
        }
        first = false;
        out << '(' << a.real();
        if (a.imag() != 0) {
            out << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << 'i';
        }
        out << ')' << t.to_string();
    }
    return out.str();
}

}  // namespace ghzforge
