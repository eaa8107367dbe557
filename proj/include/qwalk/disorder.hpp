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

#ifndef QWALK_DISORDER_HPP
#define QWALK_DISORDER_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qwalk/lattice.hpp"

namespace qwalk {

enum class DisorderMode { Static, Dynamic };

std::string_view to_string(DisorderMode mode);

/// Per-(site, spin) phase angles phi in [-W*pi, W*pi], one per physical qubit.
///
/// Static realizations reuse the same table at every step. Dynamic ones use this
/// table for step 1 and a fresh table, seeded from (seed, step), for every later
/// step.
class DisorderRealization {
   public:
    /// Rebuild a realization from stored phases (e.g. a result file). Validates
    /// the bound |phi| <= W*pi and the table length.
    DisorderRealization(LatticeSpec spec, double strength, std::uint64_t seed, DisorderMode mode,
                        std::vector<double> phases);

    const LatticeSpec &spec() const { return spec_; }
    double strength() const { return strength_; }
    std::uint64_t seed() const { return seed_; }
    DisorderMode mode() const { return mode_; }

    /// 2N angles in clockwise-basis order.
    std::span<const double> phases() const { return phases_; }
    double phase(int site, Spin spin) const { return phases_[basis_index(spec_, site, spin)]; }

    /// Angles used during step `step` (1-based).
    std::vector<double> phases_for_step(int step) const;

    bool operator==(const DisorderRealization &) const = default;

   private:
    LatticeSpec spec_;
    double strength_;
    std::uint64_t seed_;
    DisorderMode mode_;
    std::vector<double> phases_;
};

/// 2N independent uniform draws on [-W*pi, W*pi]; bit-identical for equal
/// (spec, W, seed, mode).
DisorderRealization sample_realization(const LatticeSpec &spec, double strength, std::uint64_t seed,
                                       DisorderMode mode = DisorderMode::Static);

/// Seed of ensemble member `index`, derived from the master seed by a counter.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// `n_runs` realizations, member i seeded with derive_seed(master_seed, i).
std::vector<DisorderRealization> ensemble(const LatticeSpec &spec, double strength, int n_runs,
                                          std::uint64_t master_seed, DisorderMode mode = DisorderMode::Static);

/// e^{i phi} for each angle, in the same order.
std::vector<Complex> phase_factors(std::span<const double> phases);

}  // namespace qwalk

#endif  // QWALK_DISORDER_HPP
