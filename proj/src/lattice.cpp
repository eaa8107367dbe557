// Copyright 2026 The qwalk Authors
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

#include "qwalk/lattice.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

std::string_view to_string(Topology topology) {
    return topology == Topology::Circle ? "circle" : "line";
}

std::string_view to_string(Spin spin) {
    return spin == Spin::Down ? "down" : "up";
}

LatticeSpec::LatticeSpec(int n_sites, Topology topology) : n_sites_(n_sites), topology_(topology) {
    if (n_sites < 2) {
        throw InvalidArgument("lattice needs at least 2 sites, got " + std::to_string(n_sites));
    }
}

double LatticeSpec::angular_step() const {
    return 2.0 * std::numbers::pi / n_sites_;
}

int LatticeSpec::wrap(int site) const {
    int r = site % n_sites_;
    return r < 0 ? r + n_sites_ : r;
}

int LatticeSpec::signed_distance(int site) const {
    if (site < 0 || site >= n_sites_) {
        throw InvalidArgument("site " + std::to_string(site) + " outside [0, " + std::to_string(n_sites_) + ")");
    }
    return site <= max_distance() ? site : site - n_sites_;
}

double LatticeSpec::angle(int site) const {
    return signed_distance(site) * angular_step();
}

int LatticeSpec::site_at_distance(int d) const {
    if (d < min_distance() || d > max_distance()) {
        throw InvalidArgument("signed distance " + std::to_string(d) + " not on a lattice of " +
                              std::to_string(n_sites_) + " sites");
    }
    return wrap(d);
}

std::size_t basis_index(const LatticeSpec &spec, int site, Spin spin) {
    if (site < 0 || site >= spec.n_sites()) {
        throw InvalidArgument("site " + std::to_string(site) + " outside [0, " + std::to_string(spec.n_sites()) +
                              ")");
    }
    return 2 * static_cast<std::size_t>(site) + (spin == Spin::Up ? 1 : 0);
}

std::pair<int, Spin> basis_site_spin(const LatticeSpec &spec, std::size_t index) {
    if (index >= spec.dimension()) {
        throw InvalidArgument("basis index " + std::to_string(index) + " outside [0, " +
                              std::to_string(spec.dimension()) + ")");
    }
    return {static_cast<int>(index / 2), (index & 1) ? Spin::Up : Spin::Down};
}

WalkerState::WalkerState(LatticeSpec spec, std::vector<Complex> amplitudes)
    : spec_(spec), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != spec_.dimension()) {
        throw InvalidArgument("state has " + std::to_string(amplitudes_.size()) + " amplitudes, lattice needs " +
                              std::to_string(spec_.dimension()));
    }
    check_normalized(1e-12, "WalkerState construction");
}

double WalkerState::norm_squared() const {
    double acc = 0.0;
    for (const Complex &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

void WalkerState::check_normalized(double tolerance, std::string_view context) const {
    double n2 = norm_squared();
    if (!(std::abs(n2 - 1.0) <= tolerance)) {
        throw InvariantViolation("normalization: sum |psi|^2 = " + std::to_string(n2) + " after " +
                                 std::string(context));
    }
}

WalkerState localized_state(const LatticeSpec &spec, int site, Spin spin) {
    std::vector<Complex> amps(spec.dimension());
    amps[basis_index(spec, site, spin)] = 1.0;
    return WalkerState(spec, std::move(amps));
}

WalkerState superposition_state(const LatticeSpec &spec, std::span<const StateTerm> terms) {
    if (terms.empty()) {
        throw InvalidArgument("superposition needs at least one term");
    }
    std::vector<Complex> amps(spec.dimension());
    std::set<std::size_t> seen;
    for (const StateTerm &term : terms) {
        std::size_t k = basis_index(spec, term.site, term.spin);
        if (!seen.insert(k).second) {
            throw InvalidArgument("duplicate term for site " + std::to_string(term.site) + ", spin " +
                                  std::string(to_string(term.spin)));
        }
        amps[k] = term.amplitude;
    }
    double n2 = 0.0;
    for (const Complex &a : amps) {
        n2 += std::norm(a);
    }
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw InvalidArgument("superposition has zero norm");
    }
    double scale = 1.0 / std::sqrt(n2);
    for (Complex &a : amps) {
        a *= scale;
    }
    return WalkerState(spec, std::move(amps));
}

}  // namespace qwalk
