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

#include "qwalk/disorder.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qwalk/error.hpp"
#include "uniform.hpp"

namespace qwalk {

namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void check_strength(double strength) {
    if (!(strength >= 0.0 && strength <= 1.0)) {
        throw InvalidArgument("disorder strength W must lie in [0, 1], got " + std::to_string(strength));
    }
}

// std::uniform_real_distribution is not specified bit-for-bit across standard
// libraries, so the conversion from raw draws is done by hand.
std::vector<double> draw_table(std::size_t count, double half_width, std::uint64_t seed) {
    std::vector<double> out(count, 0.0);
    if (half_width == 0.0) {
        return out;
    }
    std::mt19937_64 engine(seed);
    for (double &phi : out) {
        phi = detail::uniform_symmetric(engine, half_width);
    }
    return out;
}

}  // namespace

std::string_view to_string(DisorderMode mode) {
    return mode == DisorderMode::Static ? "static" : "dynamic";
}

DisorderRealization::DisorderRealization(LatticeSpec spec, double strength, std::uint64_t seed, DisorderMode mode,
                                         std::vector<double> phases)
    : spec_(spec), strength_(strength), seed_(seed), mode_(mode), phases_(std::move(phases)) {
    check_strength(strength_);
    if (phases_.size() != spec_.dimension()) {
        throw InvalidArgument("phase table has " + std::to_string(phases_.size()) + " entries, lattice needs " +
                              std::to_string(spec_.dimension()));
    }
    const double bound = strength_ * std::numbers::pi;
    for (std::size_t i = 0; i < phases_.size(); ++i) {
        if (!(std::abs(phases_[i]) <= bound)) {
            throw InvalidArgument("phase " + std::to_string(i) + " = " + std::to_string(phases_[i]) +
                                  " exceeds W*pi = " + std::to_string(bound));
        }
    }
}

std::vector<double> DisorderRealization::phases_for_step(int step) const {
    if (mode_ == DisorderMode::Static || step <= 1) {
        return phases_;
    }
    return draw_table(spec_.dimension(), strength_ * std::numbers::pi,
                      derive_seed(seed_, static_cast<std::uint64_t>(step)));
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(master_seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

DisorderRealization sample_realization(const LatticeSpec &spec, double strength, std::uint64_t seed,
                                       DisorderMode mode) {
    check_strength(strength);
    return DisorderRealization(spec, strength, seed, mode,
                               draw_table(spec.dimension(), strength * std::numbers::pi, seed));
}

std::vector<DisorderRealization> ensemble(const LatticeSpec &spec, double strength, int n_runs,
                                          std::uint64_t master_seed, DisorderMode mode) {
    if (n_runs < 1) {
        throw InvalidArgument("ensemble needs n_runs >= 1, got " + std::to_string(n_runs));
    }
    std::vector<DisorderRealization> out;
    out.reserve(static_cast<std::size_t>(n_runs));
    for (int i = 0; i < n_runs; ++i) {
        out.push_back(sample_realization(spec, strength, derive_seed(master_seed, static_cast<std::uint64_t>(i)), mode));
    }
    return out;
}

std::vector<Complex> phase_factors(std::span<const double> phases) {
    std::vector<Complex> out;
    out.reserve(phases.size());
    for (double phi : phases) {
        out.emplace_back(std::cos(phi), std::sin(phi));
    }
    return out;
}

}  // namespace qwalk
