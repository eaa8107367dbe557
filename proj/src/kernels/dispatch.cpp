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

#include <atomic>
#include <cstdlib>
#include <string>

#include "qwalk/error.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk::kernels {

namespace {

constexpr KernelTable kScalarTable{SimdLevel::Scalar, &ring_step_scalar, &site_marginals_scalar};
#if defined(QWALK_HAVE_AVX2)
constexpr KernelTable kAvx2Table{SimdLevel::Avx2, &ring_step_avx2, &site_marginals_avx2};
#endif

bool cpu_has_avx2() {
#if defined(QWALK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable *initial_table() {
    if (const char *env = std::getenv("QWALK_SIMD")) {
        std::string want(env);
        if (want == "scalar") {
            return &kScalarTable;
        }
        if (want == "avx2" && simd_level_available(SimdLevel::Avx2)) {
            return &kernels_for(SimdLevel::Avx2);
        }
    }
    return &kernels_for(detect_simd_level());
}

std::atomic<const KernelTable *> &active_slot() {
    static std::atomic<const KernelTable *> slot{initial_table()};
    return slot;
}

}  // namespace

std::string_view to_string(SimdLevel level) {
    switch (level) {
        case SimdLevel::Scalar:
            return "scalar";
        case SimdLevel::Avx2:
            return "avx2";
    }
    return "unknown";
}

SimdLevel detect_simd_level() {
    return cpu_has_avx2() ? SimdLevel::Avx2 : SimdLevel::Scalar;
}

bool simd_level_available(SimdLevel level) {
    return level == SimdLevel::Scalar || (level == SimdLevel::Avx2 && cpu_has_avx2());
}

const KernelTable &kernels_for(SimdLevel level) {
    if (!simd_level_available(level)) {
        throw InvalidArgument("SIMD level " + std::string(to_string(level)) + " is not available on this CPU/build");
    }
#if defined(QWALK_HAVE_AVX2)
    if (level == SimdLevel::Avx2) {
        return kAvx2Table;
    }
#endif
    return kScalarTable;
}

const KernelTable &active_kernels() {
    return *active_slot().load(std::memory_order_acquire);
}

void set_active_simd_level(SimdLevel level) {
    active_slot().store(&kernels_for(level), std::memory_order_release);
}

}  // namespace qwalk::kernels
