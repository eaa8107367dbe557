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

#include "qwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qwalk/error.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

SiteDistribution::SiteDistribution(LatticeSpec spec, std::vector<double> probabilities)
    : spec_(spec), p_(std::move(probabilities)) {
    if (p_.size() != static_cast<std::size_t>(spec_.n_sites())) {
        throw InvalidArgument("distribution has " + std::to_string(p_.size()) + " sites, lattice has " +
                              std::to_string(spec_.n_sites()));
    }
    double total = 0.0;
    for (std::size_t k = 0; k < p_.size(); ++k) {
        if (!(p_[k] >= 0.0)) {
            throw InvalidArgument("negative probability at site " + std::to_string(k));
        }
        total += p_[k];
    }
    if (!(std::abs(total - 1.0) <= 1e-10)) {
        throw InvariantViolation("site probabilities sum to " + std::to_string(total));
    }
}

SiteDistribution site_probabilities(const WalkerState &state) {
    return SiteDistribution(state.spec(), site_marginals(state));
}

double position_std_dev(const SiteDistribution &dist) {
    const LatticeSpec &spec = dist.spec();
    double mean = 0.0;
    double second = 0.0;
    for (int k = 0; k < spec.n_sites(); ++k) {
        const double d = spec.signed_distance(k);
        mean += dist.at_site(k) * d;
        second += dist.at_site(k) * d * d;
    }
    return std::sqrt(std::max(0.0, second - mean * mean));
}

FitResult fit_linear(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw InvalidArgument("fit_linear: xs and ys differ in length");
    }
    if (xs.size() < 2) {
        throw InvalidArgument("fit_linear needs at least 2 points, got " + std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw InvalidArgument("fit_linear: xs have zero variance");
    }
    FitResult r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.n_points = static_cast<int>(xs.size());
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (r.slope * xs[i] + r.intercept);
        ss_res += e * e;
    }
    // Constant ys are fitted exactly.
    r.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return r;
}

double first_moment(const SiteDistribution &dist) {
    const LatticeSpec &spec = dist.spec();
    if (spec.topology() != Topology::Circle) {
        throw Unsupported("first_moment is defined on the circular lattice");
    }
    double mu = 0.0;
    for (int k = 0; k < spec.n_sites(); ++k) {
        mu += std::abs(spec.signed_distance(k)) * dist.at_site(k);
    }
    return mu;
}

double participation_ratio(const SiteDistribution &dist) {
    double s = 0.0;
    for (double p : dist.probabilities()) {
        s += p * p;
    }
    return 1.0 / s;
}

LocalizationFit localization_length_fit(const SiteDistribution &averaged, DistanceWindow window) {
    const LatticeSpec &spec = averaged.spec();
    const int lo = window.min_distance;
    const int hi = window.max_distance > 0 ? window.max_distance : spec.n_sites() / 4;
    if (lo < 0 || hi > spec.max_distance() || lo > hi) {
        throw InvalidArgument("distance window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "] does not fit a lattice of " + std::to_string(spec.n_sites()) + " sites");
    }
    LocalizationFit out;
    std::vector<double> xs;
    std::vector<double> ys;
    for (int d = lo; d <= hi; ++d) {
        if ((window.parity == BinParity::Even && d % 2 != 0) || (window.parity == BinParity::Odd && d % 2 == 0)) {
            continue;
        }
        double p;
        const bool has_negative = -d >= spec.min_distance() && d != 0;
        if (has_negative) {
            p = 0.5 * (averaged.at_distance(d) + averaged.at_distance(-d));
        } else {
            p = averaged.at_distance(d);
        }
        if (!(p > 0.0)) {
            throw InvalidArgument("localization fit: bin |d| = " + std::to_string(d) +
                                  " has non-positive probability, log undefined");
        }
        out.distances.push_back(d);
        out.bin_probabilities.push_back(p);
        xs.push_back(d);
        ys.push_back(std::log(p));
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

Trajectory ensemble_average(std::span<const Trajectory> trajectories) {
    if (trajectories.empty()) {
        throw InvalidArgument("ensemble_average of an empty list");
    }
    const Trajectory &first = trajectories.front();
    const std::size_t n_steps = first.size();
    std::vector<std::vector<double>> acc(n_steps);
    for (std::size_t t = 0; t < n_steps; ++t) {
        acc[t].assign(first[t].probabilities().size(), 0.0);
    }
    for (std::size_t r = 0; r < trajectories.size(); ++r) {
        const Trajectory &traj = trajectories[r];
        if (traj.size() != n_steps) {
            throw InvalidArgument("ensemble_average: trajectory " + std::to_string(r) + " has " +
                                  std::to_string(traj.size()) + " steps, expected " + std::to_string(n_steps));
        }
        for (std::size_t t = 0; t < n_steps; ++t) {
            if (!(traj[t].spec() == first[t].spec())) {
                throw InvalidArgument("ensemble_average: trajectory " + std::to_string(r) + " lattice mismatch");
            }
            std::span<const double> p = traj[t].probabilities();
            for (std::size_t k = 0; k < p.size(); ++k) {
                acc[t][k] += p[k];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(trajectories.size());
    Trajectory out;
    out.reserve(n_steps);
    for (std::size_t t = 0; t < n_steps; ++t) {
        for (double &v : acc[t]) {
            v *= inv;
        }
        out.emplace_back(first[t].spec(), std::move(acc[t]));
    }
    return out;
}

}  // namespace qwalk
