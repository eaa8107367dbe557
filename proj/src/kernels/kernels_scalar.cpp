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

#include <cmath>
#include <cstddef>

#include "qwalk/kernels.hpp"

namespace qwalk::kernels {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

void ring_step_scalar(std::span<const Complex> in, std::span<const Complex> phases, std::span<Complex> out) {
    const std::size_t n_sites = in.size() / 2;
    const double *a = reinterpret_cast<const double *>(in.data());
    const double *ph = phases.empty() ? nullptr : reinterpret_cast<const double *>(phases.data());
    double *o = reinterpret_cast<double *>(out.data());

    for (std::size_t k = 0; k < n_sites; ++k) {
        const double *s = a + 4 * k;
        double dr = (s[0] + s[2]) * kInvSqrt2;
        double di = (s[1] + s[3]) * kInvSqrt2;
        double ur = (s[0] - s[2]) * kInvSqrt2;
        double ui = (s[1] - s[3]) * kInvSqrt2;
        if (ph != nullptr) {
            const double *p = ph + 4 * k;
            double nr = dr * p[0] - di * p[1];
            double ni = di * p[0] + dr * p[1];
            dr = nr;
            di = ni;
            nr = ur * p[2] - ui * p[3];
            ni = ui * p[2] + ur * p[3];
            ur = nr;
            ui = ni;
        }
        std::size_t right = (k + 1 == n_sites) ? 0 : k + 1;
        std::size_t left = (k == 0) ? n_sites - 1 : k - 1;
        o[4 * right + 0] = dr;
        o[4 * right + 1] = di;
        o[4 * left + 2] = ur;
        o[4 * left + 3] = ui;
    }
}

void site_marginals_scalar(std::span<const Complex> amplitudes, std::span<double> probabilities) {
    const double *a = reinterpret_cast<const double *>(amplitudes.data());
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        const double *s = a + 4 * k;
        probabilities[k] = (s[0] * s[0] + s[1] * s[1]) + (s[2] * s[2] + s[3] * s[3]);
    }
}

}  // namespace qwalk::kernels
