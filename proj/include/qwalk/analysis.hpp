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

#ifndef QWALK_ANALYSIS_HPP
#define QWALK_ANALYSIS_HPP

#include <span>
#include <vector>

#include "qwalk/lattice.hpp"

namespace qwalk {

/// Site probabilities with the spin traced out.
class SiteDistribution {
   public:
    /// Validates p >= 0 and |sum p - 1| <= 1e-10.
    SiteDistribution(LatticeSpec spec, std::vector<double> probabilities);

    const LatticeSpec &spec() const { return spec_; }
    std::span<const double> probabilities() const { return p_; }
    double at_site(int site) const { return p_[static_cast<std::size_t>(site)]; }
    double at_distance(int d) const { return p_[static_cast<std::size_t>(spec_.site_at_distance(d))]; }

   private:
    LatticeSpec spec_;
    std::vector<double> p_;
};

using Trajectory = std::vector<SiteDistribution>;

SiteDistribution site_probabilities(const WalkerState &state);

/// sqrt(<d^2> - <d>^2) over signed distances. Only meaningful before the
/// walker wraps around the ring.
double position_std_dev(const SiteDistribution &dist);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

/// Ordinary least squares y = slope*x + intercept.
FitResult fit_linear(std::span<const double> xs, std::span<const double> ys);

/// mu1 = sum_{j=1}^{floor(N/2)} j * (p(+j) + p(-j)), antipode counted once.
double first_moment(const SiteDistribution &dist);

/// 1 / sum_k p_k^2; N for a uniform distribution, 1 for a point mass.
double participation_ratio(const SiteDistribution &dist);

enum class BinParity { All, Even, Odd };

struct DistanceWindow {
    int min_distance = 1;
    /// 0 selects N/4.
    int max_distance = 0;
    /// Restrict to distances of one parity. A walk started on a single site
    /// only populates distances with the parity of t, so the other bins are
    /// exactly zero.
    BinParity parity = BinParity::All;
};

/// Slope magnitude below which the decay is reported as extended.
inline constexpr double kExtendedSlope = 1e-3;

struct LocalizationFit {
    FitResult fit;
    /// -1/slope; +infinity when extended.
    double xi = 0.0;
    bool extended = false;
    std::vector<int> distances;
    /// Bin values (mean of the +d and -d probabilities) used in the fit.
    std::vector<double> bin_probabilities;
};

/// Fit ln p(|d|) against |d|, with p(|d|) the mean of p(+d) and p(-d).
/// Throws InvalidArgument naming the first bin with non-positive probability.
LocalizationFit localization_length_fit(const SiteDistribution &averaged, DistanceWindow window = {});

/// Pointwise mean of equally shaped trajectories, reduced in input order.
Trajectory ensemble_average(std::span<const Trajectory> trajectories);

}  // namespace qwalk

#endif  // QWALK_ANALYSIS_HPP
