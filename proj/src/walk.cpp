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

#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/error.hpp"
#include "qwalk/kernels.hpp"

namespace qwalk {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kStepNormTolerance = 1e-12;

// Same operation order as the kernels, so the composed and fused paths agree bitwise.
Complex times(Complex a, Complex p) {
    return {a.real() * p.real() - a.imag() * p.imag(), a.imag() * p.real() + a.real() * p.imag()};
}

void check_same_lattice(const LatticeSpec &a, const LatticeSpec &b, const char *what) {
    if (!(a == b)) {
        throw InvalidArgument(std::string(what) + ": lattice mismatch (" + std::to_string(a.n_sites()) + " vs " +
                              std::to_string(b.n_sites()) + " sites)");
    }
}

}  // namespace

WalkerState coin_toss(WalkerState state) {
    std::span<Complex> a = state.mutable_amplitudes();
    for (std::size_t k = 0; k + 1 < a.size(); k += 2) {
        Complex dn = a[k];
        Complex up = a[k + 1];
        a[k] = Complex((dn.real() + up.real()) * kInvSqrt2, (dn.imag() + up.imag()) * kInvSqrt2);
        a[k + 1] = Complex((dn.real() - up.real()) * kInvSqrt2, (dn.imag() - up.imag()) * kInvSqrt2);
    }
    state.check_normalized(kStepNormTolerance, "coin_toss");
    return state;
}

WalkerState shift(WalkerState state) {
    const LatticeSpec &spec = state.spec();
    const int n = spec.n_sites();
    std::span<const Complex> in = state.amplitudes();
    if (spec.topology() == Topology::Line) {
        int right_end = spec.site_at_distance(spec.max_distance());
        int left_end = spec.site_at_distance(spec.min_distance());
        if (in[basis_index(spec, right_end, Spin::Down)] != Complex(0.0)) {
            throw BoundaryError(right_end, "shift: down amplitude at site " + std::to_string(right_end) +
                                               " would hop off the clockwise end of the line");
        }
        if (in[basis_index(spec, left_end, Spin::Up)] != Complex(0.0)) {
            throw BoundaryError(left_end, "shift: up amplitude at site " + std::to_string(left_end) +
                                              " would hop off the anticlockwise end of the line");
        }
    }
    std::vector<Complex> out(spec.dimension());
    for (int k = 0; k < n; ++k) {
        out[basis_index(spec, spec.wrap(k + 1), Spin::Down)] = in[basis_index(spec, k, Spin::Down)];
        out[basis_index(spec, spec.wrap(k - 1), Spin::Up)] = in[basis_index(spec, k, Spin::Up)];
    }
    return WalkerState(spec, std::move(out));
}

WalkerState apply_disorder(WalkerState state, const DisorderRealization &realization) {
    check_same_lattice(state.spec(), realization.spec(), "apply_disorder");
    std::vector<Complex> factors = phase_factors(realization.phases());
    std::span<Complex> a = state.mutable_amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = times(a[i], factors[i]);
    }
    state.check_normalized(kStepNormTolerance, "apply_disorder");
    return state;
}

WalkerState step(WalkerState state, const DisorderRealization *realization, int step_index) {
    const LatticeSpec spec = state.spec();
    std::vector<Complex> factors;
    if (realization != nullptr) {
        check_same_lattice(spec, realization->spec(), "step");
        factors = phase_factors(realization->phases_for_step(step_index));
    }
    if (spec.topology() == Topology::Line) {
        state = coin_toss(std::move(state));
        if (!factors.empty()) {
            std::span<Complex> a = state.mutable_amplitudes();
            for (std::size_t i = 0; i < a.size(); ++i) {
                a[i] = times(a[i], factors[i]);
            }
        }
        return shift(std::move(state));
    }
    std::vector<Complex> out(spec.dimension());
    kernels::active_kernels().ring_step(state.amplitudes(), factors, out);
    WalkerState next(spec, std::move(out));
    return next;
}

std::vector<double> site_marginals(const WalkerState &state) {
    std::vector<double> p(static_cast<std::size_t>(state.spec().n_sites()));
    kernels::active_kernels().site_marginals(state.amplitudes(), p);
    return p;
}

std::vector<StepReport> run(const WalkerState &initial, int t_steps, const DisorderRealization *realization,
                            RunOptions options) {
    if (t_steps < 0) {
        throw InvalidArgument("t_steps must be >= 0, got " + std::to_string(t_steps));
    }
    const LatticeSpec spec = initial.spec();
    if (realization != nullptr) {
        check_same_lattice(spec, realization->spec(), "run");
    }
    const kernels::KernelTable &k = kernels::active_kernels();
    const bool ring = spec.topology() == Topology::Circle;
    const bool is_static = realization == nullptr || realization->mode() == DisorderMode::Static;

    std::vector<Complex> factors;
    if (realization != nullptr) {
        factors = phase_factors(realization->phases());
    }

    std::vector<StepReport> reports;
    reports.reserve(static_cast<std::size_t>(t_steps) + 1);
    auto record = [&](int t, const WalkerState &s) {
        StepReport r;
        r.t = t;
        r.site_probabilities = site_marginals(s);
        double total = 0.0;
        for (double p : r.site_probabilities) {
            total += p;
        }
        if (!(std::abs(total - 1.0) <= 1e-10)) {
            throw InvariantViolation("site probabilities sum to " + std::to_string(total) + " at step " +
                                     std::to_string(t));
        }
        if (options.snapshot_states) {
            r.snapshot = s;
        }
        reports.push_back(std::move(r));
    };

    WalkerState current = initial;
    record(0, current);
    std::vector<Complex> scratch(spec.dimension());
    for (int t = 1; t <= t_steps; ++t) {
        if (!is_static && t > 1) {
            factors = phase_factors(realization->phases_for_step(t));
        }
        if (ring) {
            k.ring_step(current.amplitudes(), factors, scratch);
            std::vector<Complex> next(scratch);
            current = WalkerState(spec, std::move(next));
        } else {
            current = step(std::move(current), realization, t);
        }
        record(t, current);
    }
    return reports;
}

TransferMatrix::TransferMatrix(LatticeSpec spec, Eigen::MatrixXcd matrix) : spec_(spec), matrix_(std::move(matrix)) {
    const auto dim = static_cast<Eigen::Index>(spec_.dimension());
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw InvalidArgument("transfer matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
}

WalkerState TransferMatrix::apply(const WalkerState &state) const {
    check_same_lattice(spec_, state.spec(), "TransferMatrix::apply");
    Eigen::Map<const Eigen::VectorXcd> psi(state.amplitudes().data(), static_cast<Eigen::Index>(spec_.dimension()));
    Eigen::VectorXcd out = matrix_ * psi;
    return WalkerState(spec_, std::vector<Complex>(out.data(), out.data() + out.size()));
}

Eigen::MatrixXcd TransferMatrix::power(int k) const {
    if (k < 0) {
        throw InvalidArgument("negative transfer-matrix power");
    }
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
    Eigen::MatrixXcd base = matrix_;
    while (k > 0) {
        if (k & 1) {
            result = result * base;
        }
        k >>= 1;
        if (k > 0) {
            base = base * base;
        }
    }
    return result;
}

double TransferMatrix::unitarity_error() const {
    Eigen::MatrixXcd g = matrix_.adjoint() * matrix_ - Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
    return g.cwiseAbs().maxCoeff();
}

TransferMatrix build_transfer_matrix(const LatticeSpec &spec, const DisorderRealization *realization) {
    if (spec.topology() != Topology::Circle) {
        throw Unsupported("transfer matrix is defined for the circular lattice only");
    }
    if (realization != nullptr) {
        check_same_lattice(spec, realization->spec(), "build_transfer_matrix");
        if (realization->mode() != DisorderMode::Static) {
            throw Unsupported("dynamic disorder has no time-independent transfer matrix");
        }
    }
    const int n = spec.n_sites();
    const auto dim = static_cast<Eigen::Index>(spec.dimension());
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < n; ++k) {
        Complex dn_phase = 1.0;
        Complex up_phase = 1.0;
        if (realization != nullptr) {
            dn_phase = std::polar(1.0, realization->phase(k, Spin::Down));
            up_phase = std::polar(1.0, realization->phase(k, Spin::Up));
        }
        // B block: row block k+1, column block k.
        const Eigen::Index r = 2 * spec.wrap(k + 1);
        const Eigen::Index c = 2 * k;
        t(r, c) += dn_phase * kInvSqrt2;
        t(r, c + 1) += dn_phase * kInvSqrt2;
        // A block: row block k-1, column block k.
        const Eigen::Index ra = 2 * spec.wrap(k - 1) + 1;
        t(ra, c) += up_phase * kInvSqrt2;
        t(ra, c + 1) += -up_phase * kInvSqrt2;
    }
    return TransferMatrix(spec, std::move(t));
}

std::optional<int> recurrence_period(const WalkerState &initial, int t_max, double tol) {
    if (t_max < 1) {
        throw InvalidArgument("recurrence_period needs t_max >= 1");
    }
    if (!(tol > 0.0)) {
        throw InvalidArgument("recurrence_period needs tol > 0");
    }
    const std::vector<double> p0 = site_marginals(initial);
    WalkerState current = initial;
    for (int t = 1; t <= t_max; ++t) {
        current = step(std::move(current));
        std::vector<double> p = site_marginals(current);
        double dev = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            dev = std::max(dev, std::abs(p[i] - p0[i]));
        }
        if (dev < tol) {
            return t;
        }
    }
    return std::nullopt;
}

}  // namespace qwalk
