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

#ifndef QWALK_QUBIT_ORACLE_HPP
#define QWALK_QUBIT_ORACLE_HPP

#include <vector>

#include <Eigen/Dense>

#include "qwalk/disorder.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/walk.hpp"

// Brute-force simulation of the walk circuit on the full 2^(2N)-dimensional
// register of physical qubits. Exists to cross-check the subspace engine; it
// shares no code with it.
//
// Register layout: site k owns qubits 2k (black, holds the walker when it is
// spin-down) and 2k+1 (gray, spin-up). Qubit q is bit q of a basis index. One
// walk step is
//   1. cross-Hadamard on every pair (2k, 2k+1), qubit 2k as the first tensor factor;
//   2. R_z(phi) on every qubit (disorder), phi_{k,dn} on qubit 2k+1, phi_{k,up} on 2k;
//   3. SWAP on every inter-site bond (2k+1, 2k+2 mod 2N).
// The cross-Hadamard leaves the clockwise-moving amplitude on the gray qubit so
// the SWAP layer carries it to the black qubit of site k+1.
namespace qwalk::oracle {

using Gate2 = Eigen::Matrix4cd;
using Gate1 = Eigen::Matrix2cd;

/// Two-qubit SWAP in the basis {|00>, |01>, |10>, |11>}.
Gate2 swap_gate();
/// Hadamard on the single-excitation subspace {|01>, |10>} with an internal swap.
Gate2 cross_hadamard_gate();
/// exp(-i phi/2 sigma^z).
Gate1 rz_gate(double phi);

/// Dense state vector over n qubits.
class QubitRegister {
   public:
    explicit QubitRegister(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    const std::vector<Complex> &amplitudes() const { return amps_; }

    /// Basis state with a single excitation on `qubit`.
    void set_single_excitation(int qubit, Complex amplitude);
    void clear();

    /// `gate` acts on |q_first q_second> with q_first the more significant bit.
    void apply(const Gate2 &gate, int q_first, int q_second);
    void apply(const Gate1 &gate, int qubit);

    /// Probability that `qubit` is excited.
    double excitation_probability(int qubit) const;
    /// <sum_q n_q>
    double mean_excitation_number() const;
    /// Total probability outside the one-excitation sector.
    double leakage() const;

   private:
    int n_qubits_;
    std::vector<Complex> amps_;
};

/// Largest lattice the oracle accepts (2^(2*5) = 1024 amplitudes).
inline constexpr int kMaxOracleSites = 5;

/// Site-probability trajectory t = 0..t_steps of the gate-level circuit.
/// Throws Unsupported for N > kMaxOracleSites or a Line lattice.
std::vector<StepReport> qubit_layer_oracle(const WalkerState &initial, int t_steps,
                                           const DisorderRealization *realization = nullptr);

}  // namespace qwalk::oracle

#endif  // QWALK_QUBIT_ORACLE_HPP
