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

#include "qwalk/anderson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qwalk/disorder.hpp"
#include "qwalk/error.hpp"
#include "uniform.hpp"

namespace qwalk::tb {

namespace {

constexpr int kInverseIterations = 3;
constexpr double kDecayFloor = 1e-12;

// LU factorization with partial pivoting of a symmetric tridiagonal matrix
// shifted by -sigma; same scheme as LAPACK's dgttrf/dgttrs.
class ShiftedTridiagonalLU {
   public:
    ShiftedTridiagonalLU(const std::vector<double> &diag, double off, double sigma)
        : n_(diag.size()), dl_(n_ > 0 ? n_ - 1 : 0, off), d_(n_), du_(dl_.size(), off),
          du2_(n_ > 1 ? n_ - 2 : 0, 0.0), pivot_(dl_.size(), false) {
        double scale = std::abs(off);
        for (std::size_t i = 0; i < n_; ++i) {
            d_[i] = diag[i] - sigma;
            scale = std::max(scale, std::abs(diag[i]));
        }
        const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                if (d_[i] == 0.0) {
                    d_[i] = tiny;
                }
                const double fact = dl_[i] / d_[i];
                dl_[i] = fact;
                d_[i + 1] -= fact * du_[i];
            } else {
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double temp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = temp - fact * d_[i + 1];
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                pivot_[i] = true;
            }
        }
        if (n_ > 0 && d_[n_ - 1] == 0.0) {
            d_[n_ - 1] = tiny;
        }
    }

    void solve(std::vector<double> &b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (!pivot_[i]) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl_[i] * b[i];
            }
        }
        b[n_ - 1] /= d_[n_ - 1];
        if (n_ > 1) {
            b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
        }
        for (std::size_t i = n_ > 1 ? n_ - 2 : 0; i-- > 0;) {
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
        }
    }

   private:
    std::size_t n_;
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<bool> pivot_;
};

void normalize(std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    s = 1.0 / std::sqrt(s);
    for (double &x : v) {
        x *= s;
    }
}

}  // namespace

void TBSpec::validate() const {
    if (n_sites < 3) {
        throw InvalidArgument("tight-binding chain needs n_sites >= 3, got " + std::to_string(n_sites));
    }
    if (hopping == 0.0 || !std::isfinite(hopping)) {
        throw InvalidArgument("tight-binding hopping V must be finite and nonzero");
    }
    if (on_site.size() != static_cast<std::size_t>(n_sites)) {
        throw InvalidArgument("on_site has " + std::to_string(on_site.size()) + " entries, expected " +
                              std::to_string(n_sites));
    }
}

TBSpec make_tb_spec(int n_sites, double hopping, double disorder_half_width, Boundary boundary, std::uint64_t seed) {
    if (!(disorder_half_width >= 0.0)) {
        throw InvalidArgument("W_tb must be >= 0");
    }
    TBSpec spec;
    spec.n_sites = n_sites;
    spec.hopping = hopping;
    spec.boundary = boundary;
    spec.disorder_half_width = disorder_half_width;
    spec.on_site.assign(static_cast<std::size_t>(std::max(n_sites, 0)), 0.0);
    std::mt19937_64 engine(seed);
    for (double &e : spec.on_site) {
        e = detail::uniform_symmetric(engine, disorder_half_width);
    }
    spec.validate();
    return spec;
}

Eigen::MatrixXd tb_hamiltonian(const TBSpec &spec) {
    spec.validate();
    const Eigen::Index n = spec.n_sites;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        h(j, j) = spec.on_site[static_cast<std::size_t>(j)];
        if (j + 1 < n) {
            h(j, j + 1) = spec.hopping;
            h(j + 1, j) = spec.hopping;
        }
    }
    if (spec.boundary == Boundary::Periodic) {
        h(0, n - 1) = spec.hopping;
        h(n - 1, 0) = spec.hopping;
    }
    return h;
}

Eigen::Matrix2d tb_transfer_matrix(double energy, double on_site, double hopping) {
    if (hopping == 0.0) {
        throw InvalidArgument("tb_transfer_matrix: V must be nonzero");
    }
    Eigen::Matrix2d t;
    t << (energy - on_site) / hopping, -1.0, 1.0, 0.0;
    return t;
}

TransferProduct::TransferProduct() : m_(Eigen::Matrix2d::Identity()) {}

void TransferProduct::push(const Eigen::Matrix2d &factor) {
    m_ = factor * m_;
    // The normalized product drifts towards rank one, so its own determinant
    // loses all precision; accumulate the factors' determinants instead.
    log_abs_det_ += std::log(std::abs(factor.determinant()));
    const double s = m_.cwiseAbs().maxCoeff();
    m_ /= s;
    log_scale_ += std::log(s);
    ++count_;
}

double TransferProduct::log_abs_det() const {
    return log_abs_det_;
}

LyapunovEstimate lyapunov_from_sequence(double energy, std::span<const double> on_site, double hopping,
                                        int block_size) {
    if (on_site.empty()) {
        throw InvalidArgument("lyapunov_from_sequence needs at least one site");
    }
    if (hopping == 0.0) {
        throw InvalidArgument("lyapunov: V must be nonzero");
    }
    if (block_size < 1) {
        throw InvalidArgument("lyapunov: block_size must be >= 1");
    }
    double upper = 1.0;  // psi_{j+1}
    double lower = 0.0;  // psi_j
    double total = 0.0;
    double block_acc = 0.0;
    int in_block = 0;
    std::vector<double> block_means;
    for (double eps : on_site) {
        const double next = (energy - eps) / hopping * upper - lower;
        lower = upper;
        upper = next;
        const double growth = std::hypot(upper, lower);
        upper /= growth;
        lower /= growth;
        const double lg = std::log(growth);
        total += lg;
        block_acc += lg;
        if (++in_block == block_size) {
            block_means.push_back(block_acc / block_size);
            block_acc = 0.0;
            in_block = 0;
        }
    }
    LyapunovEstimate est;
    est.energy = energy;
    est.k_steps = static_cast<long>(on_site.size());
    est.log_growth_rate = total / static_cast<double>(on_site.size());
    est.lambda1 = std::max(0.0, est.log_growth_rate);
    if (block_means.size() >= 2) {
        double mean = 0.0;
        for (double b : block_means) {
            mean += b;
        }
        mean /= static_cast<double>(block_means.size());
        double var = 0.0;
        for (double b : block_means) {
            var += (b - mean) * (b - mean);
        }
        var /= static_cast<double>(block_means.size() - 1);
        est.standard_error = std::sqrt(var / static_cast<double>(block_means.size()));
    } else {
        est.standard_error = std::numeric_limits<double>::infinity();
    }
    return est;
}

LyapunovEstimate lyapunov_exponent(double energy, double disorder_half_width, double hopping, long k_max,
                                   std::uint64_t seed) {
    if (k_max < 1000) {
        throw InvalidArgument("lyapunov_exponent needs k_max >= 1000, got " + std::to_string(k_max));
    }
    if (!(disorder_half_width >= 0.0)) {
        throw InvalidArgument("W_tb must be >= 0");
    }
    std::vector<double> eps(static_cast<std::size_t>(k_max));
    std::mt19937_64 engine(seed);
    for (double &e : eps) {
        e = detail::uniform_symmetric(engine, disorder_half_width);
    }
    return lyapunov_from_sequence(energy, eps, hopping, 1000);
}

Eigensystem tb_eigensystem(const TBSpec &spec) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tb_hamiltonian(spec));
    if (solver.info() != Eigen::Success) {
        throw InvariantViolation("tight-binding eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigenpair tb_eigenpair_near(const TBSpec &spec, double target) {
    spec.validate();
    if (spec.boundary == Boundary::Periodic) {
        Eigensystem sys = tb_eigensystem(spec);
        Eigen::Index best = 0;
        (sys.energies.array() - target).abs().minCoeff(&best);
        return {sys.energies(best), sys.states.col(best)};
    }

    const Eigen::Index n = spec.n_sites;
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(spec.on_site.data(), n);
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, spec.hopping);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw InvariantViolation("tridiagonal eigenvalue iteration did not converge");
    }
    Eigen::Index best = 0;
    (solver.eigenvalues().array() - target).abs().minCoeff(&best);
    const double energy = solver.eigenvalues()(best);

    ShiftedTridiagonalLU lu(spec.on_site, spec.hopping, energy);
    std::vector<double> v(static_cast<std::size_t>(n));
    // Deterministic start vector with no special symmetry.
    std::mt19937_64 engine(0x5eed);
    for (double &x : v) {
        x = 1.0 + 0.5 * detail::uniform_symmetric(engine, 1.0);
    }
    normalize(v);
    for (int it = 0; it < kInverseIterations; ++it) {
        lu.solve(v);
        normalize(v);
    }
    Eigen::VectorXd state = Eigen::Map<Eigen::VectorXd>(v.data(), n);
    Eigen::Index peak = 0;
    state.cwiseAbs().maxCoeff(&peak);
    if (state(peak) < 0) {
        state = -state;
    }
    return {energy, state};
}

double tb_participation_ratio(const Eigen::VectorXd &state) {
    const double norm2 = state.squaredNorm();
    return norm2 * norm2 / state.array().pow(4).sum();
}

EigenstateDecay eigenstate_decay(const TBSpec &spec, double target_energy) {
    Eigenpair pair = tb_eigenpair_near(spec, target_energy);
    const Eigen::VectorXd &psi = pair.state;
    const int n = spec.n_sites;

    EigenstateDecay out;
    out.energy = pair.energy;
    out.participation_ratio = tb_participation_ratio(psi);
    Eigen::Index center = 0;
    const double peak = psi.cwiseAbs().maxCoeff(&center);
    out.center = static_cast<int>(center);

    std::vector<double> xs;
    std::vector<double> ys;
    const int reach = spec.boundary == Boundary::Periodic ? n / 2 : n - 1;
    for (int r = 1; r <= reach; ++r) {
        for (int sign : {+1, -1}) {
            int j = out.center + sign * r;
            if (spec.boundary == Boundary::Periodic) {
                if (sign < 0 && 2 * r == n) {
                    continue;  // antipode already taken
                }
                j = ((j % n) + n) % n;
            } else if (j < 0 || j >= n) {
                continue;
            }
            const double a = std::abs(psi(j));
            if (a > kDecayFloor * peak) {
                xs.push_back(r);
                ys.push_back(std::log(a));
            }
        }
    }
    if (xs.size() < 2) {
        // Entire state sits on the peak site.
        out.fit = FitResult{-std::numeric_limits<double>::infinity(), std::log(peak), 1.0, 1};
        out.xi = 0.0;
        return out;
    }
    out.fit = fit_linear(xs, ys);
    if (out.fit.slope > -kExtendedSlope) {
        out.extended = true;
        out.xi = std::numeric_limits<double>::infinity();
    } else {
        out.xi = -1.0 / out.fit.slope;
    }
    return out;
}

BorlandReport borland_check(double target_energy, double disorder_half_width, double hopping, int n_sites,
                            std::span<const std::uint64_t> seeds, long lyapunov_steps) {
    if (seeds.empty()) {
        throw InvalidArgument("borland_check needs at least one seed");
    }
    BorlandReport report;
    double sum_xi = 0.0;
    double sum_inv_lambda = 0.0;
    double sum_ratio = 0.0;
    for (std::uint64_t seed : seeds) {
        TBSpec spec = make_tb_spec(n_sites, hopping, disorder_half_width, Boundary::Open, seed);
        EigenstateDecay decay = eigenstate_decay(spec, target_energy);
        LyapunovEstimate lyap = lyapunov_exponent(decay.energy, disorder_half_width, hopping, lyapunov_steps,
                                                  derive_seed(seed, 1));
        report.per_seed_energy.push_back(decay.energy);
        if (decay.extended || lyap.lambda1 < kExtendedSlope) {
            report.extended = true;
            report.per_seed_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double ratio = decay.xi * lyap.lambda1;
        report.per_seed_ratio.push_back(ratio);
        sum_xi += decay.xi;
        sum_inv_lambda += 1.0 / lyap.lambda1;
        sum_ratio += ratio;
    }
    if (report.extended) {
        const double inf = std::numeric_limits<double>::infinity();
        report.xi_from_decay = inf;
        report.xi_from_lyapunov = inf;
        report.ratio = std::numeric_limits<double>::quiet_NaN();
        return report;
    }
    const double m = static_cast<double>(seeds.size());
    report.xi_from_decay = sum_xi / m;
    report.xi_from_lyapunov = sum_inv_lambda / m;
    report.ratio = sum_ratio / m;
    return report;
}

}  // namespace qwalk::tb
