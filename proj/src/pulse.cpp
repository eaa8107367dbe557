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

#include "qwalk/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk::pulse {

namespace {

using Complex = std::complex<double>;

constexpr double kUnitarityTolerance = 1e-10;

void check_nonnegative(double v, const char *what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(what) + " must be finite and >= 0");
    }
}

// exp(-i K) for Hermitian K.
Eigen::Matrix4cd expm_hermitian(const Eigen::Matrix4cd &k) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(k);
    Eigen::Vector4cd phases;
    for (int i = 0; i < 4; ++i) {
        phases(i) = std::polar(1.0, -es.eigenvalues()(i));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double max_abs_deviation_from_identity(const Eigen::MatrixXcd &u) {
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

PulseProfile::PulseProfile(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) {
        return;
    }
    if (knots_.front().t != 0.0) {
        throw InvalidArgument("pulse profile must start at t = 0");
    }
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i].t) || !std::isfinite(knots_[i].value)) {
            throw InvalidArgument("pulse knot " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && knots_[i].t < knots_[i - 1].t) {
            throw InvalidArgument("pulse knot times must be non-decreasing (knot " + std::to_string(i) + ")");
        }
    }
}

PulseProfile PulseProfile::trapezoid(double t_ramp_up, double t_plateau, double t_ramp_down, double amplitude) {
    check_nonnegative(t_ramp_up, "t_ramp_up");
    check_nonnegative(t_plateau, "t_plateau");
    check_nonnegative(t_ramp_down, "t_ramp_down");
    const double t1 = t_ramp_up;
    const double t2 = t1 + t_plateau;
    const double t3 = t2 + t_ramp_down;
    return PulseProfile({{0.0, 0.0}, {t1, amplitude}, {t2, amplitude}, {t3, 0.0}});
}

PulseProfile PulseProfile::triangle(double duration, double peak) {
    check_nonnegative(duration, "duration");
    return PulseProfile({{0.0, 0.0}, {0.5 * duration, peak}, {duration, 0.0}});
}

PulseProfile PulseProfile::rectangle(double duration, double amplitude) {
    check_nonnegative(duration, "duration");
    if (duration == 0.0) {
        return PulseProfile();
    }
    return PulseProfile({{0.0, 0.0}, {0.0, amplitude}, {duration, amplitude}, {duration, 0.0}});
}

double PulseProfile::sample(double t) const {
    if (knots_.empty() || t < 0.0 || t > duration()) {
        return 0.0;
    }
    if (t == duration()) {
        return knots_.back().value;
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double x, const Knot &k) { return x < k.t; });
    const Knot &b = *it;
    const Knot &a = *(it - 1);
    const double w = (t - a.t) / (b.t - a.t);
    return a.value + w * (b.value - a.value);
}

double PulseProfile::area() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        acc += 0.5 * (knots_[i].value + knots_[i - 1].value) * (knots_[i].t - knots_[i - 1].t);
    }
    return acc;
}

TrapezoidPulse trapezoid_for_area(double g_max, double t_ramp, double target_area) {
    if (!(g_max > 0.0)) {
        throw InvalidArgument("trapezoid_for_area: g_max must be > 0");
    }
    if (!(t_ramp >= 0.0)) {
        throw InvalidArgument("trapezoid_for_area: t_ramp must be >= 0");
    }
    if (!(target_area > 0.0)) {
        throw InvalidArgument("trapezoid_for_area: target area must be > 0");
    }
    const double plateau = target_area / g_max - t_ramp;
    if (plateau < 0.0) {
        throw InvalidArgument("area unreachable at this amplitude/ramp: plateau would be " + std::to_string(plateau) +
                              " ns; use a shorter ramp (at most " + std::to_string(target_area / g_max) + " ns)");
    }
    return TrapezoidPulse{t_ramp, plateau, t_ramp, g_max};
}

double TwoQubitSchedule::duration() const {
    return std::max({omega1.duration(), omega2.duration(), coupling.duration()});
}

void TwoQubitSchedule::validate() const {
    auto check = [](const PulseProfile &p, const char *name, double lo, double hi) {
        if (p.empty()) {
            return;
        }
        if (p.knots().front().value != 0.0) {
            throw InvalidArgument(std::string(name) + " schedule must start at zero");
        }
        for (const Knot &k : p.knots()) {
            if (k.value < lo || k.value > hi) {
                throw InvalidArgument(std::string(name) + " = " + std::to_string(k.value) + " rad/ns at t = " +
                                      std::to_string(k.t) + " ns is outside [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
            }
        }
    };
    check(omega1, "Omega1", 0.0, kMaxDetuning);
    check(omega2, "Omega2", 0.0, kMaxDetuning);
    check(coupling, "g", -kMaxCoupling, kMaxCoupling);
}

Eigen::Matrix4cd hamiltonian(double omega1, double omega2, double coupling) {
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    h(0, 0) = 0.5 * (omega1 + omega2);
    h(1, 1) = 0.5 * (omega1 - omega2);
    h(2, 2) = 0.5 * (-omega1 + omega2);
    h(3, 3) = -0.5 * (omega1 + omega2);
    h(1, 2) = coupling;
    h(2, 1) = coupling;
    return h;
}

Eigen::Matrix4cd propagate(const TwoQubitSchedule &schedule, double dt, const PropagationObserver &observer) {
    if (!(dt > 0.0)) {
        throw InvalidArgument("propagate: dt must be > 0");
    }
    schedule.validate();
    const double total = schedule.duration();
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    if (total == 0.0) {
        return u;
    }
    const long n_steps = static_cast<long>(std::ceil(total / dt - 1e-9));
    const double h = total / static_cast<double>(n_steps);
    const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
    const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double comm_weight = std::sqrt(3.0) / 12.0;
    auto h_at = [&](double t) {
        return hamiltonian(schedule.omega1.sample(t), schedule.omega2.sample(t), schedule.coupling.sample(t));
    };
    for (long s = 0; s < n_steps; ++s) {
        const double t0 = h * static_cast<double>(s);
        const Eigen::Matrix4cd h1 = h_at(t0 + c1 * h);
        const Eigen::Matrix4cd h2 = h_at(t0 + c2 * h);
        // Magnus: Omega = -i h/2 (H1 + H2) - sqrt3/12 h^2 [H2, H1]; exp(Omega) = exp(-i K).
        const Eigen::Matrix4cd comm = h2 * h1 - h1 * h2;
        const Eigen::Matrix4cd k = 0.5 * h * (h1 + h2) + Complex(0.0, -comm_weight * h * h) * comm;
        u = expm_hermitian(0.5 * (k + k.adjoint())) * u;
        if (observer) {
            observer(t0 + h, u);
        }
    }
    const double drift = max_abs_deviation_from_identity(u);
    if (drift > kUnitarityTolerance) {
        throw InvariantViolation("unitarity: ||U^dagger U - I||_max = " + std::to_string(drift) +
                                 "; reduce dt");
    }
    return u;
}

Eigen::Matrix2cd single_excitation_block(const Eigen::Matrix4cd &u) {
    return u.block<2, 2>(1, 1);
}

TwoQubitSchedule z_rotation_schedule(double phi, double omega_max) {
    if (!(omega_max > 0.0)) {
        throw InvalidArgument("z_rotation_schedule: omega_max must be > 0");
    }
    TwoQubitSchedule s;
    if (phi == 0.0) {
        return s;
    }
    PulseProfile excursion = PulseProfile::rectangle(std::abs(phi) / omega_max, omega_max);
    if (phi > 0.0) {
        s.omega1 = std::move(excursion);
    } else {
        s.omega2 = std::move(excursion);
    }
    return s;
}

TwoQubitSchedule coupling_schedule(PulseProfile coupling) {
    TwoQubitSchedule s;
    s.coupling = std::move(coupling);
    return s;
}

double gate_fidelity(const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &target, PhaseCorrection correction) {
    if (u.rows() != target.rows() || u.cols() != target.cols() || u.rows() != u.cols()) {
        throw InvalidArgument("gate_fidelity: dimension mismatch");
    }
    const Eigen::Index d = u.rows();
    if (d != 2 && d != 4) {
        throw InvalidArgument("gate_fidelity: expected 2x2 or 4x4 unitaries");
    }
    double overlap = 0.0;
    switch (correction) {
        case PhaseCorrection::None:
            overlap = std::max(0.0, (target.adjoint() * u).trace().real());
            break;
        case PhaseCorrection::Global:
            overlap = std::abs((target.adjoint() * u).trace());
            break;
        case PhaseCorrection::PerExcitationBlock:
            if (d == 2) {
                overlap = std::abs((target.adjoint() * u).trace());
            } else {
                overlap = std::abs(std::conj(target(0, 0)) * u(0, 0)) +
                          std::abs((target.block(1, 1, 2, 2).adjoint() * u.block(1, 1, 2, 2)).trace()) +
                          std::abs(std::conj(target(3, 3)) * u(3, 3));
            }
            break;
    }
    const double dd = static_cast<double>(d);
    return std::clamp((dd + overlap * overlap) / (dd * (dd + 1.0)), 0.0, 1.0);
}

double phase_aligned_deviation(const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &target) {
    if (u.rows() != target.rows() || u.cols() != target.cols()) {
        throw InvalidArgument("phase_aligned_deviation: dimension mismatch");
    }
    const Complex tr = (target.adjoint() * u).trace();
    const Complex phase = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex(1.0);
    return (u * std::conj(phase) - target).cwiseAbs().maxCoeff();
}

Eigen::Matrix2cd rx(double phi) {
    Eigen::Matrix2cd m;
    m << std::cos(phi / 2), Complex(0.0, -std::sin(phi / 2)), Complex(0.0, -std::sin(phi / 2)), std::cos(phi / 2);
    return m;
}

Eigen::Matrix2cd rz(double phi) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::polar(1.0, -phi / 2);
    m(1, 1) = std::polar(1.0, phi / 2);
    return m;
}

Eigen::Matrix2cd cross_hadamard_block() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd m;
    m << s, s, -s, s;
    return m;
}

Eigen::Matrix2cd swap_block() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

EulerReport euler_cross_hadamard(const EulerOptions &options) {
    const double half_pi = std::numbers::pi / 2;
    EulerReport r;
    r.target = cross_hadamard_block();
    r.symbolic = rz(-half_pi) * rx(half_pi) * rz(half_pi);
    r.symbolic_deviation = phase_aligned_deviation(r.symbolic, r.target);

    const TwoQubitSchedule first = z_rotation_schedule(half_pi, options.omega_max);
    const TwoQubitSchedule middle =
        coupling_schedule(trapezoid_for_area(options.g_max, options.t_ramp, options.middle_area).profile());
    const TwoQubitSchedule last = z_rotation_schedule(-half_pi, options.omega_max);
    const Eigen::Matrix4cd u =
        propagate(last, options.dt) * propagate(middle, options.dt) * propagate(first, options.dt);
    r.pulsed = single_excitation_block(u);
    r.pulsed_deviation = phase_aligned_deviation(r.pulsed, r.target);
    r.total_duration = first.duration() + middle.duration() + last.duration();
    return r;
}

void write_schedule_csv(const TwoQubitSchedule &schedule, double dt, std::ostream &out) {
    if (!(dt > 0.0)) {
        throw InvalidArgument("write_schedule_csv: dt must be > 0");
    }
    out << "t_ns,g_rad_per_ns,omega1_rad_per_ns,omega2_rad_per_ns\n";
    const double total = schedule.duration();
    const long n = static_cast<long>(std::ceil(total / dt - 1e-9));
    char line[160];
    for (long i = 0; i <= n; ++i) {
        const double t = std::min(total, dt * static_cast<double>(i));
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", t, schedule.coupling.sample(t),
                      schedule.omega1.sample(t), schedule.omega2.sample(t));
        out << line;
    }
}

}  // namespace qwalk::pulse
