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

#include "gtest/gtest.h"
#include "qwalk/error.hpp"
#include "qwalk/qubit_oracle.hpp"

using namespace qwalk;
using namespace qwalk::oracle;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

double max_prob_dev(const std::vector<StepReport> &a, const std::vector<StepReport> &b) {
    double d = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        for (std::size_t k = 0; k < a[t].site_probabilities.size(); ++k) {
            d = std::max(d, std::abs(a[t].site_probabilities[k] - b[t].site_probabilities[k]));
        }
    }
    return d;
}

}  // namespace

TEST(Gates, swap_exchanges_single_excitation) {
    Eigen::Vector4cd in = Eigen::Vector4cd::Zero();
    in(2) = 1.0;  // |10>
    Eigen::Vector4cd out = swap_gate() * in;
    EXPECT_EQ(out(1), Complex(1.0));  // |01>
    EXPECT_EQ(out(2), Complex(0.0));
}

TEST(Gates, cross_hadamard_action) {
    Eigen::Vector4cd in = Eigen::Vector4cd::Zero();
    in(1) = 1.0;  // |01>
    Eigen::Vector4cd out = cross_hadamard_gate() * in;
    EXPECT_NEAR(std::abs(out(1) - kS), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out(2) + kS), 0.0, 1e-15);
    in.setZero();
    in(2) = 1.0;  // |10>
    out = cross_hadamard_gate() * in;
    EXPECT_NEAR(std::abs(out(1) - kS), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out(2) - kS), 0.0, 1e-15);
    // |00> and |11> untouched.
    EXPECT_EQ(cross_hadamard_gate()(0, 0), Complex(1.0));
    EXPECT_EQ(cross_hadamard_gate()(3, 3), Complex(1.0));
}

TEST(Gates, unitary) {
    for (const Gate2 &g : {swap_gate(), cross_hadamard_gate()}) {
        EXPECT_LT((g.adjoint() * g - Gate2::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    }
    const Gate1 rz = rz_gate(0.8);
    EXPECT_NEAR(std::arg(rz(1, 1) / rz(0, 0)), 0.8, 1e-15);
}

TEST(Register, two_qubit_gate_ordering) {
    QubitRegister reg(2);
    reg.set_single_excitation(0, 1.0);  // |q1 q0> = |01>
    reg.apply(cross_hadamard_gate(), 1, 0);
    EXPECT_NEAR(std::abs(reg.amplitudes()[1] - kS), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(reg.amplitudes()[2] + kS), 0.0, 1e-15);
    EXPECT_NEAR(reg.excitation_probability(0), 0.5, 1e-15);
    EXPECT_NEAR(reg.excitation_probability(1), 0.5, 1e-15);
    EXPECT_NEAR(reg.mean_excitation_number(), 1.0, 1e-15);
    EXPECT_NEAR(reg.leakage(), 0.0, 1e-15);
}

TEST(Register, swap_on_distant_qubits) {
    QubitRegister reg(6);
    reg.set_single_excitation(1, 1.0);
    reg.apply(swap_gate(), 1, 5);
    EXPECT_NEAR(reg.excitation_probability(5), 1.0, 1e-15);
    EXPECT_NEAR(reg.excitation_probability(1), 0.0, 1e-15);
}

TEST(Register, size_limits) {
    EXPECT_THROW(QubitRegister(0), Unsupported);
    EXPECT_THROW(QubitRegister(2 * kMaxOracleSites + 1), Unsupported);
}

TEST(Oracle, clean_walk_matches_engine) {
    for (int n : {2, 3, 4, 5}) {
        LatticeSpec spec(n);
        for (int start = 0; start < 2 * n; ++start) {
            auto [site, spin] = basis_site_spin(spec, static_cast<std::size_t>(start));
            const WalkerState psi0 = localized_state(spec, site, spin);
            EXPECT_LT(max_prob_dev(run(psi0, 30), qubit_layer_oracle(psi0, 30)), 1e-12) << n;
        }
    }
}

TEST(Oracle, disordered_walk_matches_engine) {
    LatticeSpec spec(4);
    const WalkerState psi0 = localized_state(spec, 0, Spin::Down);
    double worst = 0.0;
    for (auto mode : {DisorderMode::Static, DisorderMode::Dynamic}) {
        for (const auto &r : ensemble(spec, 1.0, 25, 2718, mode)) {
            worst = std::max(worst, max_prob_dev(run(psi0, 25, &r), qubit_layer_oracle(psi0, 25, &r)));
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Oracle, superposed_start) {
    LatticeSpec spec(4);
    const StateTerm terms[] = {{1, Spin::Down, Complex(1.0, 0.5)}, {3, Spin::Up, Complex(-0.3, 1.0)}};
    const WalkerState psi0 = superposition_state(spec, terms);
    auto r = sample_realization(spec, 0.7, 4);
    EXPECT_LT(max_prob_dev(run(psi0, 20, &r), qubit_layer_oracle(psi0, 20, &r)), 1e-12);
}

TEST(Oracle, four_site_distribution_returns_after_eight_steps) {
    LatticeSpec spec(4);
    auto r = qubit_layer_oracle(localized_state(spec, 0, Spin::Down), 8);
    EXPECT_NEAR(r[8].site_probabilities[0], 1.0, 1e-12);
    for (int t = 1; t < 8; ++t) {
        EXPECT_LT(r[t].site_probabilities[0], 1.0 - 1e-9) << t;
    }
}

TEST(Oracle, rejects_unsupported_lattices) {
    EXPECT_THROW(qubit_layer_oracle(localized_state(LatticeSpec(6), 0, Spin::Down), 1), Unsupported);
    EXPECT_THROW(qubit_layer_oracle(localized_state(LatticeSpec(4, Topology::Line), 0, Spin::Down), 1), Unsupported);
}
