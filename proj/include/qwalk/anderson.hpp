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

#ifndef QWALK_ANDERSON_HPP
#define QWALK_ANDERSON_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/analysis.hpp"

// Tight-binding Anderson chain H = sum_j eps_j |j><j| + V sum_<jk> |j><k| and
// its 2x2 transfer matrices. Amplitudes are real throughout. The disorder
// half-width here (W_tb, energy units) is unrelated to the walk's W.
namespace qwalk::tb {

enum class Boundary { Periodic, Open };

struct TBSpec {
    int n_sites = 0;
    double hopping = 1.0;
    std::vector<double> on_site;
    Boundary boundary = Boundary::Open;
    double disorder_half_width = 0.0;

    /// n_sites >= 3, hopping != 0, on_site.size() == n_sites.
    void validate() const;
};

/// eps_j uniform on [-W_tb, W_tb], deterministic in `seed`.
TBSpec make_tb_spec(int n_sites, double hopping, double disorder_half_width, Boundary boundary, std::uint64_t seed);

/// Dense real-symmetric N x N Hamiltonian; corner couplings only when Periodic.
Eigen::MatrixXd tb_hamiltonian(const TBSpec &spec);

/// [[(E - eps)/V, -1], [1, 0]], mapping (psi_j, psi_{j-1}) to (psi_{j+1}, psi_j).
Eigen::Matrix2d tb_transfer_matrix(double energy, double on_site, double hopping);

/// Product of 2x2 matrices kept as (normalized matrix) * exp(log_scale).
class TransferProduct {
   public:
    TransferProduct();
    /// this <- factor * this
    void push(const Eigen::Matrix2d &factor);
    const Eigen::Matrix2d &normalized() const { return m_; }
    double log_scale() const { return log_scale_; }
    /// ln |det| of the full product.
    double log_abs_det() const;
    int size() const { return count_; }

   private:
    Eigen::Matrix2d m_;
    double log_scale_ = 0.0;
    double log_abs_det_ = 0.0;
    int count_ = 0;
};

struct LyapunovEstimate {
    /// Growth rate clamped at zero.
    double lambda1 = 0.0;
    /// Unclamped (1/k) sum ln(growth).
    double log_growth_rate = 0.0;
    long k_steps = 0;
    double standard_error = 0.0;
    double energy = 0.0;
};

/// Propagate (psi_1, psi_0) = (1, 0) through the transfer matrices of `on_site`,
/// renormalizing every step and accumulating the log of each growth factor.
/// The standard error comes from means over blocks of `block_size` steps.
LyapunovEstimate lyapunov_from_sequence(double energy, std::span<const double> on_site, double hopping,
                                        int block_size = 1000);

/// Same, with k_max on-site energies drawn uniform on [-W_tb, W_tb]. k_max >= 1000.
LyapunovEstimate lyapunov_exponent(double energy, double disorder_half_width, double hopping, long k_max,
                                   std::uint64_t seed);

struct Eigensystem {
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXd states;    // columns, orthonormal
};

Eigensystem tb_eigensystem(const TBSpec &spec);

/// Eigenpair with energy closest to `target`. Open chains use tridiagonal QL
/// eigenvalues plus inverse iteration; periodic
/// rings use a dense solve.
struct Eigenpair {
    double energy = 0.0;
    Eigen::VectorXd state;
};
Eigenpair tb_eigenpair_near(const TBSpec &spec, double target);

/// 1 / sum_j psi_j^4 of a normalized real vector.
double tb_participation_ratio(const Eigen::VectorXd &state);

struct EigenstateDecay {
    FitResult fit;
    double xi = 0.0;
    bool extended = false;
    double energy = 0.0;
    int center = 0;
    double participation_ratio = 0.0;
};

/// Fit ln|psi| against distance from the amplitude maximum for the eigenstate
/// nearest `target_energy`. Points below 1e-12 of the peak are dropped.
/// A slope above -1e-3 is flagged extended (xi = +inf).
EigenstateDecay eigenstate_decay(const TBSpec &spec, double target_energy);

struct BorlandReport {
    double xi_from_decay = 0.0;      // mean over seeds
    double xi_from_lyapunov = 0.0;   // mean of 1/lambda1 over seeds
    double ratio = 0.0;              // mean of xi_decay * lambda1
    bool extended = false;           // any seed flagged extended
    std::vector<double> per_seed_ratio;
    std::vector<double> per_seed_energy;
};

/// Localization length of an actual eigenstate near `target_energy` against
/// the inverse Lyapunov exponent at that eigenstate's energy, per seed.
BorlandReport borland_check(double target_energy, double disorder_half_width, double hopping, int n_sites,
                            std::span<const std::uint64_t> seeds, long lyapunov_steps = 100000);

}  // namespace qwalk::tb

#endif  // QWALK_ANDERSON_HPP
