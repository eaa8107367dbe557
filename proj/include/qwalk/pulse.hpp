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

#ifndef QWALK_PULSE_HPP
#define QWALK_PULSE_HPP

#include <functional>
#include <numbers>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

// Pulse-level model of two tunably coupled qubits in the rotating frame:
//   H(t) = Omega1/2 Z1 + Omega2/2 Z2 + g/2 (X1 X2 + Y1 Y2)
// in the basis {|00>, |01>, |10>, |11>} (qubit 1 is the first tensor factor).
// Times are in ns and every coefficient is an angular frequency in rad/ns, so a
// value quoted in GHz is multiplied by 2*pi.
namespace qwalk::pulse {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// 0 <= Omega <= 2 GHz
inline constexpr double kMaxDetuning = kTwoPi * 2.0;
/// |g| <= 50 MHz
inline constexpr double kMaxCoupling = kTwoPi * 0.05;
inline constexpr double kDefaultDt = 1e-3;
inline constexpr double kDefaultRamp = 1.0;

struct Knot {
    double t;
    double value;
};

/// Piecewise-linear schedule starting at t = 0. Two knots at the same time
/// encode a jump; sample() takes the value after the jump. Zero outside
/// [0, duration].
class PulseProfile {
   public:
    PulseProfile() = default;
    explicit PulseProfile(std::vector<Knot> knots);

    static PulseProfile trapezoid(double t_ramp_up, double t_plateau, double t_ramp_down, double amplitude);
    static PulseProfile triangle(double duration, double peak);
    /// Constant `amplitude` on (0, duration), jumping from and back to zero.
    static PulseProfile rectangle(double duration, double amplitude);

    double sample(double t) const;
    double duration() const { return knots_.empty() ? 0.0 : knots_.back().t; }
    /// Exact integral of the piecewise-linear schedule.
    double area() const;
    bool empty() const { return knots_.empty(); }
    const std::vector<Knot> &knots() const { return knots_; }

   private:
    std::vector<Knot> knots_;
};

/// Trapezoid with equal ramps: area = g_max * (t_plateau + t_ramp).
struct TrapezoidPulse {
    double t_ramp_up = 0.0;
    double t_plateau = 0.0;
    double t_ramp_down = 0.0;
    double g_max = 0.0;

    double duration() const { return t_ramp_up + t_plateau + t_ramp_down; }
    double area() const { return g_max * (t_plateau + 0.5 * (t_ramp_up + t_ramp_down)); }
    PulseProfile profile() const { return PulseProfile::trapezoid(t_ramp_up, t_plateau, t_ramp_down, g_max); }
};

/// Plateau length that makes the trapezoid enclose `target_area`:
/// t_plateau = target_area / g_max - t_ramp. Throws if that is negative.
TrapezoidPulse trapezoid_for_area(double g_max, double t_ramp, double target_area);

/// Detuning and coupling schedules for one gate.
struct TwoQubitSchedule {
    PulseProfile omega1;
    PulseProfile omega2;
    PulseProfile coupling;

    double duration() const;
    /// Amplitude bounds at every knot and zero initial values; throws InvalidArgument.
    void validate() const;
};

Eigen::Matrix4cd hamiltonian(double omega1, double omega2, double coupling);

/// Observer called after every integration step with the elapsed time and the
/// propagator so far.
using PropagationObserver = std::function<void(double t, const Eigen::Matrix4cd &u)>;

/// Time-ordered propagator of the schedule, fourth-order Magnus integrator with
/// two Gauss-Legendre nodes per step. Throws InvariantViolation if the result
/// drifts from unitarity by more than 1e-10.
Eigen::Matrix4cd propagate(const TwoQubitSchedule &schedule, double dt = kDefaultDt,
                           const PropagationObserver &observer = {});

/// Restriction to the single-excitation block {|01>, |10>}.
Eigen::Matrix2cd single_excitation_block(const Eigen::Matrix4cd &u);

/// Excursion of one qubit frequency with the coupling off, realising
/// R_z(phi) = exp(-i phi/2 sigma^z) on the {|01>, |10>} subspace. Positive phi
/// detunes qubit 1, negative phi detunes qubit 2 (detunings are non-negative).
/// Duration |phi| / omega_max.
TwoQubitSchedule z_rotation_schedule(double phi, double omega_max = kMaxDetuning);

/// Schedule with only a coupling pulse.
TwoQubitSchedule coupling_schedule(PulseProfile coupling);

enum class PhaseCorrection {
    /// Phases must match exactly.
    None,
    /// One global phase is free.
    Global,
    /// Each excitation-number block ({|00>}, {|01>,|10>}, {|11>}) carries a free
    /// phase, as removable by local z rotations.
    PerExcitationBlock,
};

/// Average gate fidelity (d + |T|^2) / (d (d + 1)) with T the phase-corrected
/// overlap tr(target^dagger u). Both matrices are 2x2 or both 4x4.
double gate_fidelity(const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &target, PhaseCorrection correction);

/// max_ij |e^{-i a} u_ij - target_ij| with a the phase of tr(target^dagger u).
double phase_aligned_deviation(const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &target);

/// exp(-i phi/2 sigma^nu) for nu = x, z.
Eigen::Matrix2cd rx(double phi);
Eigen::Matrix2cd rz(double phi);
/// Cross-Hadamard on {|01>, |10>}: [[1, 1], [-1, 1]] / sqrt2.
Eigen::Matrix2cd cross_hadamard_block();
/// SWAP on {|01>, |10>}: sigma^x.
Eigen::Matrix2cd swap_block();

struct EulerOptions {
    double g_max = kMaxCoupling;
    double t_ramp = kDefaultRamp;
    double omega_max = kMaxDetuning;
    double dt = kDefaultDt;
    /// Area of the middle coupling pulse; pi/4 realises R_x(pi/2).
    double middle_area = std::numbers::pi / 4;
};

struct EulerReport {
    Eigen::Matrix2cd symbolic;  // R_z(-pi/2) R_x(pi/2) R_z(pi/2)
    Eigen::Matrix2cd pulsed;    // restricted propagator of the pulse sequence
    Eigen::Matrix2cd target;    // cross-Hadamard block
    double symbolic_deviation = 0.0;
    double pulsed_deviation = 0.0;
    double total_duration = 0.0;
};

/// Build the cross-Hadamard from z excursion, coupling pulse, z excursion and
/// compare with the target after global-phase alignment.
EulerReport euler_cross_hadamard(const EulerOptions &options = {});

/// CSV with columns t_ns, g, omega1, omega2 (rad/ns) sampled every dt.
void write_schedule_csv(const TwoQubitSchedule &schedule, double dt, std::ostream &out);

}  // namespace qwalk::pulse

#endif  // QWALK_PULSE_HPP
