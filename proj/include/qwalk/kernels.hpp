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

#ifndef QWALK_KERNELS_HPP
#define QWALK_KERNELS_HPP

#include <span>
#include <string_view>

#include "qwalk/lattice.hpp"

// Inner loops of the walk engine. Each kernel has a scalar reference version
// and an AVX2 version; both perform the same IEEE operations in the same
// order (no FMA contraction), so their outputs are bit-identical.
namespace qwalk::kernels {

enum class SimdLevel { Scalar, Avx2 };

std::string_view to_string(SimdLevel level);

/// One coin + phase + shift step on a ring.
///
/// `in` and `out` hold 2N amplitudes in the clockwise basis and must not alias.
/// `phases` is either empty (no disorder) or 2N unit-modulus factors e^{i phi}
/// in the same basis order, applied after the coin and before the shift.
using RingStepFn = void (*)(std::span<const Complex> in, std::span<const Complex> phases, std::span<Complex> out);

/// p_k = |psi_{k,dn}|^2 + |psi_{k,up}|^2 for every site.
using SiteMarginalsFn = void (*)(std::span<const Complex> amplitudes, std::span<double> probabilities);

struct KernelTable {
    SimdLevel level;
    RingStepFn ring_step;
    SiteMarginalsFn site_marginals;
};

void ring_step_scalar(std::span<const Complex> in, std::span<const Complex> phases, std::span<Complex> out);
void site_marginals_scalar(std::span<const Complex> amplitudes, std::span<double> probabilities);

#if defined(QWALK_HAVE_AVX2)
void ring_step_avx2(std::span<const Complex> in, std::span<const Complex> phases, std::span<Complex> out);
void site_marginals_avx2(std::span<const Complex> amplitudes, std::span<double> probabilities);
#endif

/// Best level the running CPU supports (and this build was compiled for).
SimdLevel detect_simd_level();
bool simd_level_available(SimdLevel level);

/// Kernel table for a specific level; throws InvalidArgument if unavailable.
const KernelTable &kernels_for(SimdLevel level);

/// Process-wide table. Chosen on first use from QWALK_SIMD (scalar|avx2) if
/// set, otherwise detect_simd_level().
const KernelTable &active_kernels();
void set_active_simd_level(SimdLevel level);

}  // namespace qwalk::kernels

#endif  // QWALK_KERNELS_HPP
