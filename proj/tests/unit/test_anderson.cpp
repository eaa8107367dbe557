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
#include <limits>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "qwalk/anderson.hpp"
#include "qwalk/error.hpp"

using namespace qwalk;
using namespace qwalk::tb;

TEST(Hamiltonian, clean_ring) {
    TBSpec spec = make_tb_spec(4, 1.0, 0.0, Boundary::Periodic, 0);
    Eigen::MatrixXd h = tb_hamiltonian(spec);
    EXPECT_EQ(h(0, 3), 1.0);
    EXPECT_EQ(h(3, 0), 1.0);
    EXPECT_EQ(h(0, 2), 0.0);
    Eigensystem es = tb_eigensystem(spec);
    const double expected[] = {-2.0, 0.0, 0.0, 2.0};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(es.energies(i), expected[i], 1e-12);
    }
}

TEST(Hamiltonian, open_chain_has_no_corner) {
    TBSpec spec = make_tb_spec(3, 0.5, 0.0, Boundary::Open, 0);
    Eigen::MatrixXd h = tb_hamiltonian(spec);
    EXPECT_EQ(h(0, 2), 0.0);
    EXPECT_EQ(h(0, 1), 0.5);
    // Open 3-chain: 2V cos(k pi / 4), k = 1..3.
    Eigensystem es = tb_eigensystem(spec);
    EXPECT_NEAR(es.energies(0), -2 * 0.5 * std::cos(std::numbers::pi / 4), 1e-12);
    EXPECT_NEAR(es.energies(1), 0.0, 1e-12);
}

TEST(Hamiltonian, on_site_energies_on_diagonal_and_bounded) {
    TBSpec spec = make_tb_spec(50, 1.0, 2.0, Boundary::Open, 3);
    Eigen::MatrixXd h = tb_hamiltonian(spec);
    for (int j = 0; j < 50; ++j) {
        EXPECT_EQ(h(j, j), spec.on_site[static_cast<std::size_t>(j)]);
        EXPECT_LE(std::abs(h(j, j)), 2.0);
    }
    EXPECT_EQ(make_tb_spec(50, 1.0, 2.0, Boundary::Open, 3).on_site, spec.on_site);
}

TEST(Hamiltonian, validation) {
    EXPECT_THROW(make_tb_spec(2, 1.0, 0.0, Boundary::Open, 0), InvalidArgument);
    EXPECT_THROW(make_tb_spec(5, 0.0, 0.0, Boundary::Open, 0), InvalidArgument);
    EXPECT_THROW(make_tb_spec(5, 1.0, -1.0, Boundary::Open, 0), InvalidArgument);
}

TEST(TransferMatrix2x2, unit_determinant_and_recursion) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Matrix2d t = tb_transfer_matrix(u(rng), u(rng), 0.5 + std::abs(u(rng)));
        EXPECT_NEAR(t.determinant(), 1.0, 1e-12);
    }
    // (E - eps) psi_j = V (psi_{j+1} + psi_{j-1})
    const Eigen::Vector2d next = tb_transfer_matrix(1.5, 0.25, 2.0) * Eigen::Vector2d(3.0, 1.0);
    EXPECT_NEAR(next(0), (1.5 - 0.25) / 2.0 * 3.0 - 1.0, 1e-15);
    EXPECT_NEAR(next(1), 3.0, 1e-15);
    EXPECT_THROW(tb_transfer_matrix(0.0, 0.0, 0.0), InvalidArgument);
}

TEST(TransferMatrix2x2, band_edge_grows_linearly) {
    // At E = 2V the clean recursion is psi_{j+1} = 2 psi_j - psi_{j-1}.
    Eigen::Vector2d v(1.0, 0.0);
    for (int k = 1; k <= 50; ++k) {
        v = tb_transfer_matrix(2.0, 0.0, 1.0) * v;
        EXPECT_NEAR(v(0), k + 1.0, 1e-12);
    }
}

TEST(TransferProduct, matches_naive_product) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    TransferProduct prod;
    Eigen::Matrix2d naive = Eigen::Matrix2d::Identity();
    for (int k = 0; k < 30; ++k) {
        const Eigen::Matrix2d t = tb_transfer_matrix(0.3, u(rng), 1.0);
        naive = t * naive;
        prod.push(t);
    }
    const Eigen::Matrix2d rebuilt = prod.normalized() * std::exp(prod.log_scale());
    EXPECT_LT((rebuilt - naive).cwiseAbs().maxCoeff() / naive.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(prod.size(), 30);
}

TEST(TransferProduct, determinant_stays_one) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    TransferProduct prod;
    for (int k = 0; k < 1000; ++k) {
        prod.push(tb_transfer_matrix(0.0, u(rng), 1.0));
    }
    EXPECT_NEAR(prod.log_abs_det(), 0.0, 1e-8);
    EXPECT_GT(prod.log_scale(), 10.0);
}

TEST(Lyapunov, outside_band_constant_chain) {
    // Evanescent solution: growth exp(k * acosh(E / 2V)).
    std::vector<double> eps(20000, 0.0);
    LyapunovEstimate e = lyapunov_from_sequence(3.0, eps, 1.0);
    EXPECT_NEAR(e.lambda1, std::acosh(1.5), 1e-3);
}

TEST(Lyapunov, clean_chain_in_band_is_zero) {
    LyapunovEstimate e = lyapunov_exponent(0.0, 0.0, 1.0, 100000, 1);
    EXPECT_LT(e.lambda1, 1e-3);
    EXPECT_EQ(e.k_steps, 100000);
}

TEST(Lyapunov, positive_and_seed_stable_with_disorder) {
    std::vector<double> l;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        l.push_back(lyapunov_exponent(0.0, 1.0, 1.0, 100000, s).lambda1);
    }
    double mean = 0.0;
    for (double x : l) {
        mean += x;
    }
    mean /= 10.0;
    double var = 0.0;
    for (double x : l) {
        var += (x - mean) * (x - mean);
    }
    const double cv = std::sqrt(var / 9.0) / mean;
    EXPECT_GT(mean, 0.0);
    EXPECT_LT(cv, 0.1);
    EXPECT_EQ(lyapunov_exponent(0.0, 1.0, 1.0, 5000, 4).lambda1, lyapunov_exponent(0.0, 1.0, 1.0, 5000, 4).lambda1);
}

TEST(Lyapunov, localization_length_shrinks_with_disorder) {
    double previous = std::numeric_limits<double>::infinity();
    for (double w : {1.0, 2.0, 4.0}) {
        const double xi = 1.0 / lyapunov_exponent(0.0, w, 1.0, 100000, 7).lambda1;
        EXPECT_LT(xi, previous) << w;
        previous = xi;
    }
}

TEST(Lyapunov, argument_checks) {
    EXPECT_THROW(lyapunov_exponent(0.0, 1.0, 1.0, 999, 1), InvalidArgument);
    EXPECT_THROW(lyapunov_exponent(0.0, -1.0, 1.0, 1000, 1), InvalidArgument);
    EXPECT_THROW(lyapunov_from_sequence(0.0, std::span<const double>{}, 1.0), InvalidArgument);
}

TEST(Eigenpair, open_chain_matches_dense_solver) {
    TBSpec spec = make_tb_spec(300, 1.0, 2.0, Boundary::Open, 12);
    Eigensystem dense = tb_eigensystem(spec);
    Eigen::MatrixXd h = tb_hamiltonian(spec);
    for (double target : {-1.3, 0.0, 0.7}) {
        Eigenpair p = tb_eigenpair_near(spec, target);
        Eigen::Index best = 0;
        (dense.energies.array() - target).abs().minCoeff(&best);
        EXPECT_NEAR(p.energy, dense.energies(best), 1e-10);
        EXPECT_NEAR(std::abs(p.state.dot(dense.states.col(best))), 1.0, 1e-8);
        EXPECT_LT((h * p.state - p.energy * p.state).norm(), 1e-9);
    }
}

TEST(Eigensystem, orthonormal) {
    TBSpec spec = make_tb_spec(40, 1.0, 1.0, Boundary::Periodic, 2);
    Eigensystem es = tb_eigensystem(spec);
    EXPECT_LT((es.states.transpose() * es.states - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ParticipationRatio, localized_at_strong_disorder) {
    for (std::uint64_t s = 1; s <= 5; ++s) {
        TBSpec spec = make_tb_spec(500, 1.0, 4.0, Boundary::Open, s);
        EXPECT_LT(tb_participation_ratio(tb_eigenpair_near(spec, 0.0).state), 250.0) << s;
    }
    Eigen::VectorXd flat = Eigen::VectorXd::Constant(16, 0.25);
    EXPECT_NEAR(tb_participation_ratio(flat), 16.0, 1e-12);
}

TEST(EigenstateDecay, exponential_tails) {
    TBSpec spec = make_tb_spec(1000, 1.0, 2.0, Boundary::Open, 21);
    EigenstateDecay d = eigenstate_decay(spec, 0.0);
    EXPECT_FALSE(d.extended);
    EXPECT_LT(d.fit.slope, 0.0);
    EXPECT_GE(d.fit.r_squared, 0.7);
    EXPECT_LT(d.participation_ratio, 100.0);
    EXPECT_GT(d.xi, 0.0);
}

TEST(Borland, decay_length_tracks_inverse_lyapunov) {
    const std::uint64_t seeds[] = {1, 2, 3};
    BorlandReport r = borland_check(0.0, 2.0, 1.0, 800, seeds, 20000);
    ASSERT_EQ(r.per_seed_ratio.size(), 3u);
    EXPECT_FALSE(r.extended);
    EXPECT_GT(r.ratio, 0.5);
    EXPECT_LT(r.ratio, 2.0);
    EXPECT_THROW(borland_check(0.0, 2.0, 1.0, 800, std::span<const std::uint64_t>{}, 20000), InvalidArgument);
}
