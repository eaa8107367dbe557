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

#ifndef QWALK_WALK_HPP
#define QWALK_WALK_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/disorder.hpp"
#include "qwalk/lattice.hpp"

namespace qwalk {

/// Hadamard coin on every site: |dn> -> (|dn> + |up>)/sqrt2, |up> -> (|dn> - |up>)/sqrt2.
WalkerState coin_toss(WalkerState state);

/// Conditional shift: dn amplitudes move one site clockwise, up amplitudes one
/// site anticlockwise. On a Line, any nonzero amplitude that would cross the cut
/// raises BoundaryError naming the site.
WalkerState shift(WalkerState state);

/// Multiply amplitude (k, s) by e^{i phi_{k,s}} using the step-1 table.
WalkerState apply_disorder(WalkerState state, const DisorderRealization &realization);

/// coin -> phases -> shift. `step_index` (1-based) selects the table of a
/// dynamic realization; null realization means a clean step.
WalkerState step(WalkerState state, const DisorderRealization *realization = nullptr, int step_index = 1);

struct StepReport {
    int t = 0;
    std::vector<double> site_probabilities;
    std::optional<WalkerState> snapshot;
};

struct RunOptions {
    bool snapshot_states = false;
};

/// Reports for t = 0..t_steps. Static disorder reuses one table; dynamic
/// disorder draws a fresh table for every step.
std::vector<StepReport> run(const WalkerState &initial, int t_steps, const DisorderRealization *realization = nullptr,
                            RunOptions options = {});

/// Site probabilities (spin traced out) of a state, via the active kernel.
std::vector<double> site_marginals(const WalkerState &state);

/// One-step evolution operator on the ring, assembled from the 2x2 blocks
///   A = [[0, 0], [1, -1]]/sqrt2 (from the clockwise neighbour, up component)
///   B = [[1, 1], [0, 0]]/sqrt2  (from the anticlockwise neighbour, dn component)
/// so that psi(t+1) = T psi(t).
class TransferMatrix {
   public:
    TransferMatrix(LatticeSpec spec, Eigen::MatrixXcd matrix);

    const LatticeSpec &spec() const { return spec_; }
    const Eigen::MatrixXcd &matrix() const { return matrix_; }

    WalkerState apply(const WalkerState &state) const;
    /// T^k via repeated squaring.
    Eigen::MatrixXcd power(int k) const;
    /// max |(T^dagger T - I)_{ij}|
    double unitarity_error() const;

   private:
    LatticeSpec spec_;
    Eigen::MatrixXcd matrix_;
};

/// Transfer matrix of the clean walk (or of a static disorder realization).
/// Throws Unsupported for Line topology.
TransferMatrix build_transfer_matrix(const LatticeSpec &spec, const DisorderRealization *realization = nullptr);

/// Smallest t in [1, t_max] whose site distribution matches t = 0 in max-norm
/// below `tol`, or nullopt.
std::optional<int> recurrence_period(const WalkerState &initial, int t_max, double tol);

}  // namespace qwalk

#endif  // QWALK_WALK_HPP
