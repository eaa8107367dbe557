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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"
#include "qwalk/error.hpp"
#include "qwalk/pulse.hpp"

using namespace qwalk;
using namespace qwalk::pulse;

namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;
const Complex kI(0.0, 1.0);

// exp(-i A (|01><10| + h.c.)) restricted to {|01>, |10>}.
Eigen::Matrix2cd exchange_block(double area) {
    Eigen::Matrix2cd m;
    m << std::cos(area), -kI * std::sin(area), -kI * std::sin(area), std::cos(area);
    return m;
}

double max_abs(const Eigen::MatrixXcd &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Trapezoid, plateau_for_target_area) {
    TrapezoidPulse p = trapezoid_for_area(kMaxCoupling, 1.0, kPi / 2);
    EXPECT_NEAR(p.t_plateau, 4.0, 1e-12);
    EXPECT_NEAR(p.duration(), 6.0, 1e-12);
    EXPECT_NEAR(p.area(), kPi / 2, 1e-12);
    EXPECT_NEAR(p.profile().area(), kPi / 2, 1e-12);
    TrapezoidPulse q = trapezoid_for_area(kMaxCoupling, 1.0, kPi / 4);
    EXPECT_NEAR(q.t_plateau, 1.5, 1e-12);
    EXPECT_NEAR(q.duration(), 3.5, 1e-12);
}

TEST(Trapezoid, unreachable_area) {
    try {
        trapezoid_for_area(kMaxCoupling, 3.0, kPi / 4);
        FAIL() << "expected InvalidArgument";
    } catch (const InvalidArgument &e) {
        EXPECT_NE(std::string(e.what()).find("unreachable"), std::string::npos);
    }
    EXPECT_THROW(trapezoid_for_area(0.0, 1.0, 1.0), InvalidArgument);
}

TEST(Profile, sampling) {
    PulseProfile p = PulseProfile::trapezoid(1.0, 2.0, 0.5, 4.0);
    EXPECT_DOUBLE_EQ(p.sample(0.0), 0.0);
    EXPECT_DOUBLE_EQ(p.sample(0.25), 1.0);
    EXPECT_DOUBLE_EQ(p.sample(2.0), 4.0);
    EXPECT_DOUBLE_EQ(p.sample(3.25), 2.0);
    EXPECT_DOUBLE_EQ(p.sample(3.5), 0.0);
    EXPECT_DOUBLE_EQ(p.sample(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(p.sample(9.0), 0.0);
    EXPECT_DOUBLE_EQ(p.area(), 4.0 * (2.0 + 0.75));
    PulseProfile r = PulseProfile::rectangle(2.0, 3.0);
    EXPECT_DOUBLE_EQ(r.sample(0.0), 3.0);
    EXPECT_DOUBLE_EQ(r.sample(1.9), 3.0);
    EXPECT_DOUBLE_EQ(r.area(), 6.0);
    EXPECT_DOUBLE_EQ(PulseProfile::triangle(2.0, 1.0).area(), 1.0);
}

TEST(Profile, knot_validation) {
    EXPECT_THROW(PulseProfile({{0.5, 0.0}, {1.0, 0.0}}), InvalidArgument);
    EXPECT_THROW(PulseProfile({{0.0, 0.0}, {1.0, 1.0}, {0.5, 0.0}}), InvalidArgument);
    EXPECT_THROW(PulseProfile::trapezoid(-1.0, 1.0, 1.0, 1.0), InvalidArgument);
}

TEST(Schedule, amplitude_bounds) {
    EXPECT_THROW(coupling_schedule(PulseProfile::rectangle(1.0, 1.01 * kMaxCoupling)).validate(), InvalidArgument);
    EXPECT_NO_THROW(coupling_schedule(PulseProfile::rectangle(1.0, -kMaxCoupling)).validate());
    TwoQubitSchedule s;
    s.omega1 = PulseProfile::rectangle(1.0, -0.1);
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.omega1 = PulseProfile({{0.0, 0.5}, {1.0, 0.0}});
    EXPECT_THROW(s.validate(), InvalidArgument);
}

TEST(Hamiltonian, structure) {
    Eigen::Matrix4cd h = hamiltonian(1.0, 3.0, 0.2);
    EXPECT_LT(max_abs(h - h.adjoint()), 1e-15);
    EXPECT_DOUBLE_EQ(h(0, 0).real(), 2.0);
    EXPECT_DOUBLE_EQ(h(1, 1).real(), -1.0);
    EXPECT_DOUBLE_EQ(h(2, 2).real(), 1.0);
    EXPECT_DOUBLE_EQ(h(3, 3).real(), -2.0);
    EXPECT_DOUBLE_EQ(h(1, 2).real(), 0.2);
    EXPECT_EQ(h(0, 1), Complex(0.0));
}

TEST(Propagate, area_theorem_shape_independence) {
    const double area = kPi / 2;
    const PulseProfile shapes[] = {trapezoid_for_area(kMaxCoupling, 1.0, area).profile(),
                                   PulseProfile::triangle(2.0 * area / kMaxCoupling, kMaxCoupling),
                                   PulseProfile::rectangle(area / kMaxCoupling, kMaxCoupling)};
    for (const auto &shape : shapes) {
        const Eigen::Matrix4cd u = propagate(coupling_schedule(shape));
        EXPECT_LT(max_abs(single_excitation_block(u) - exchange_block(area)), 1e-8);
    }
}

TEST(Propagate, half_area_squared_is_full_area) {
    const Eigen::Matrix4cd quarter = propagate(coupling_schedule(trapezoid_for_area(kMaxCoupling, 1.0, kPi / 4).profile()));
    const Eigen::Matrix4cd half = propagate(coupling_schedule(trapezoid_for_area(kMaxCoupling, 1.0, kPi / 2).profile()));
    EXPECT_LT(max_abs(quarter * quarter - half), 1e-8);
}

TEST(Propagate, conserves_excitation_number) {
    TwoQubitSchedule s = coupling_schedule(PulseProfile::triangle(5.0, kMaxCoupling));
    s.omega1 = PulseProfile::triangle(4.0, 2.0);
    s.omega2 = PulseProfile::rectangle(3.0, 1.0);
    const Eigen::Matrix4cd u = propagate(s);
    EXPECT_LT(max_abs(u.adjoint() * u - Eigen::Matrix4cd::Identity()), 1e-12);
    for (int i = 1; i <= 2; ++i) {
        EXPECT_EQ(std::abs(u(0, i)), 0.0);
        EXPECT_EQ(std::abs(u(3, i)), 0.0);
    }
    EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(u(3, 3)), 1.0, 1e-14);
}

TEST(Propagate, observer_and_empty_schedule) {
    int calls = 0;
    double last_t = 0.0;
    propagate(coupling_schedule(PulseProfile::rectangle(1.0, 0.1)), 0.01, [&](double t, const Eigen::Matrix4cd &) {
        ++calls;
        last_t = t;
    });
    EXPECT_EQ(calls, 100);
    EXPECT_NEAR(last_t, 1.0, 1e-12);
    EXPECT_EQ(propagate(TwoQubitSchedule{}), Eigen::Matrix4cd::Identity());
    EXPECT_THROW(propagate(TwoQubitSchedule{}, 0.0), InvalidArgument);
}

TEST(Swap, trapezoid_gate_time_and_fidelity) {
    const TrapezoidPulse p = trapezoid_for_area(kMaxCoupling, 1.0, kPi / 2);
    const Eigen::Matrix4cd u = propagate(coupling_schedule(p.profile()));
    Eigen::Matrix4cd target = Eigen::Matrix4cd::Identity();
    target.block<2, 2>(1, 1) = swap_block();
    EXPECT_LE(p.duration(), 7.0);
    EXPECT_GE(gate_fidelity(u, target, PhaseCorrection::PerExcitationBlock), 1.0 - 1e-6);
    // Without block phases the -i on the exchanged pair costs fidelity:
    // |tr(target^dag U)| = |2 - 2i|, F = (4 + 8) / 20.
    EXPECT_NEAR(gate_fidelity(u, target, PhaseCorrection::Global), 0.6, 1e-8);
}

TEST(ZRotation, frequency_excursions) {
    for (double phi : {kPi / 2, -kPi / 2, 1.3, -0.4}) {
        const TwoQubitSchedule s = z_rotation_schedule(phi);
        EXPECT_NEAR(s.duration(), std::abs(phi) / kMaxDetuning, 1e-15);
        const Eigen::Matrix2cd blk = single_excitation_block(propagate(s));
        EXPECT_LT(max_abs(blk - rz(phi)), 1e-8) << phi;
    }
    EXPECT_EQ(z_rotation_schedule(0.0).duration(), 0.0);
    EXPECT_THROW(z_rotation_schedule(1.0, 0.0), InvalidArgument);
}

TEST(ZRotation, uses_one_excursion_per_sign) {
    EXPECT_FALSE(z_rotation_schedule(0.5).omega1.empty());
    EXPECT_TRUE(z_rotation_schedule(0.5).omega2.empty());
    EXPECT_TRUE(z_rotation_schedule(-0.5).omega1.empty());
    EXPECT_FALSE(z_rotation_schedule(-0.5).omega2.empty());
}

TEST(Rotations, exchange_quarter_area_is_rx_half_pi) {
    const Eigen::Matrix4cd u = propagate(coupling_schedule(trapezoid_for_area(kMaxCoupling, 1.0, kPi / 4).profile()));
    EXPECT_LT(max_abs(single_excitation_block(u) - rx(kPi / 2)), 1e-8);
}

TEST(Euler, cross_hadamard_composition) {
    EulerReport r = euler_cross_hadamard();
    EXPECT_LT(r.symbolic_deviation, 1e-14);
    EXPECT_LT(max_abs(r.symbolic - cross_hadamard_block()), 1e-14);
    EXPECT_LT(r.pulsed_deviation, 1e-6);
    EXPECT_NEAR(r.total_duration, 3.5 + 2.0 * (kPi / 2) / kMaxDetuning, 1e-12);
}

TEST(Euler, half_pi_middle_pulse_is_wrong_gate) {
    EulerOptions o;
    o.middle_area = kPi / 2;
    EulerReport r = euler_cross_hadamard(o);
    EXPECT_GT(r.pulsed_deviation, 0.5);
}

TEST(Fidelity, examples) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    EXPECT_NEAR(gate_fidelity(id, id, PhaseCorrection::None), 1.0, 1e-15);
    EXPECT_NEAR(gate_fidelity(x, id, PhaseCorrection::Global), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(gate_fidelity(-id, id, PhaseCorrection::None), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(gate_fidelity(-id, id, PhaseCorrection::Global), 1.0, 1e-15);
    EXPECT_NEAR(gate_fidelity(kI * id, id, PhaseCorrection::None), 1.0 / 3.0, 1e-15);
    EXPECT_THROW(gate_fidelity(id, Eigen::Matrix4cd::Identity(), PhaseCorrection::None), InvalidArgument);
}

TEST(Fidelity, block_phases_removed) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    u(0, 0) = std::polar(1.0, 0.3);
    u(3, 3) = std::polar(1.0, -1.1);
    u.block<2, 2>(1, 1) *= std::polar(1.0, 2.0);
    EXPECT_NEAR(gate_fidelity(u, Eigen::Matrix4cd::Identity(), PhaseCorrection::PerExcitationBlock), 1.0, 1e-14);
    EXPECT_LT(gate_fidelity(u, Eigen::Matrix4cd::Identity(), PhaseCorrection::Global), 0.9);
}

TEST(ScheduleCsv, header_and_rows) {
    std::ostringstream out;
    write_schedule_csv(coupling_schedule(PulseProfile::rectangle(1.0, 0.2)), 0.25, out);
    const std::string s = out.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "t_ns,g_rad_per_ns,omega1_rad_per_ns,omega2_rad_per_ns");
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 6);
}
