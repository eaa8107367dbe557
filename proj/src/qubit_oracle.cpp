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

#include "qwalk/qubit_oracle.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk::oracle {

Gate2 swap_gate() {
    Gate2 g = Gate2::Zero();
    g(0, 0) = 1.0;
    g(1, 2) = 1.0;
    g(2, 1) = 1.0;
    g(3, 3) = 1.0;
    return g;
}

Gate2 cross_hadamard_gate() {
    const double s = 1.0 / std::sqrt(2.0);
    Gate2 g = Gate2::Zero();
    g(0, 0) = 1.0;
    g(1, 1) = s;
    g(1, 2) = s;
    g(2, 1) = -s;
    g(2, 2) = s;
    g(3, 3) = 1.0;
    return g;
}

Gate1 rz_gate(double phi) {
    Gate1 g = Gate1::Zero();
    g(0, 0) = std::polar(1.0, -phi / 2);
    g(1, 1) = std::polar(1.0, phi / 2);
    return g;
}

QubitRegister::QubitRegister(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 2 * kMaxOracleSites) {
        throw Unsupported("qubit register of " + std::to_string(n_qubits) + " qubits is outside the oracle's range");
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex(0.0));
}

void QubitRegister::clear() {
    std::fill(amps_.begin(), amps_.end(), Complex(0.0));
}

void QubitRegister::set_single_excitation(int qubit, Complex amplitude) {
    amps_[std::size_t{1} << qubit] = amplitude;
}

void QubitRegister::apply(const Gate2 &gate, int q_first, int q_second) {
    const std::size_t b1 = std::size_t{1} << q_first;
    const std::size_t b2 = std::size_t{1} << q_second;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & b1) || (i & b2)) {
            continue;
        }
        const std::size_t idx[4] = {i, i | b2, i | b1, i | b1 | b2};
        Complex in[4];
        for (int r = 0; r < 4; ++r) {
            in[r] = amps_[idx[r]];
        }
        for (int r = 0; r < 4; ++r) {
            Complex acc = 0.0;
            for (int c = 0; c < 4; ++c) {
                acc += gate(r, c) * in[c];
            }
            amps_[idx[r]] = acc;
        }
    }
}

void QubitRegister::apply(const Gate1 &gate, int qubit) {
    const std::size_t b = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & b) {
            continue;
        }
        Complex a0 = amps_[i];
        Complex a1 = amps_[i | b];
        amps_[i] = gate(0, 0) * a0 + gate(0, 1) * a1;
        amps_[i | b] = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
}

double QubitRegister::excitation_probability(int qubit) const {
    const std::size_t b = std::size_t{1} << qubit;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & b) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

double QubitRegister::mean_excitation_number() const {
    double n = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        n += std::popcount(i) * std::norm(amps_[i]);
    }
    return n;
}

double QubitRegister::leakage() const {
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (std::popcount(i) != 1) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

std::vector<StepReport> qubit_layer_oracle(const WalkerState &initial, int t_steps,
                                           const DisorderRealization *realization) {
    const LatticeSpec &spec = initial.spec();
    const int n = spec.n_sites();
    if (spec.topology() != Topology::Circle) {
        throw Unsupported("qubit-layer oracle models the circular lattice only");
    }
    if (n > kMaxOracleSites) {
        throw Unsupported("qubit-layer oracle limited to " + std::to_string(kMaxOracleSites) + " sites, got " +
                          std::to_string(n));
    }
    if (t_steps < 0) {
        throw InvalidArgument("t_steps must be >= 0");
    }
    if (realization != nullptr && !(realization->spec() == spec)) {
        throw InvalidArgument("qubit_layer_oracle: lattice mismatch");
    }
    const int n_qubits = 2 * n;
    QubitRegister reg(n_qubits);
    for (int k = 0; k < n; ++k) {
        reg.set_single_excitation(2 * k, initial.amplitude(k, Spin::Down));
        reg.set_single_excitation(2 * k + 1, initial.amplitude(k, Spin::Up));
    }

    const Gate2 ch = cross_hadamard_gate();
    const Gate2 sw = swap_gate();

    std::vector<StepReport> reports;
    auto record = [&](int t) {
        if (reg.leakage() > 1e-12) {
            throw InvariantViolation("oracle left the single-excitation sector at step " + std::to_string(t));
        }
        StepReport r;
        r.t = t;
        r.site_probabilities.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            r.site_probabilities[static_cast<std::size_t>(k)] =
                reg.excitation_probability(2 * k) + reg.excitation_probability(2 * k + 1);
        }
        reports.push_back(std::move(r));
    };

    record(0);
    for (int t = 1; t <= t_steps; ++t) {
        for (int k = 0; k < n; ++k) {
            reg.apply(ch, 2 * k, 2 * k + 1);
        }
        if (realization != nullptr) {
            std::vector<double> phases = realization->phases_for_step(t);
            for (int k = 0; k < n; ++k) {
                reg.apply(rz_gate(phases[basis_index(spec, k, Spin::Down)]), 2 * k + 1);
                reg.apply(rz_gate(phases[basis_index(spec, k, Spin::Up)]), 2 * k);
            }
        }
        for (int k = 0; k < n; ++k) {
            reg.apply(sw, 2 * k + 1, (2 * k + 2) % n_qubits);
        }
        record(t);
    }
    return reports;
}

}  // namespace qwalk::oracle
