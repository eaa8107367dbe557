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

#ifndef QWALK_LATTICE_HPP
#define QWALK_LATTICE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qwalk {

using Complex = std::complex<double>;

enum class Topology { Circle, Line };

/// Walker spin. Down = excitation in the black qubit of a site, Up = in the gray one.
enum class Spin : std::uint8_t { Down = 0, Up = 1 };

std::string_view to_string(Topology topology);
std::string_view to_string(Spin spin);

/// Geometry of a 1D lattice of qubit pairs.
///
/// Sites are numbered 0..N-1 clockwise from the origin. The signed distance of
/// a site from the origin is `site` for site <= N/2 and `site - N` otherwise, so
/// the antipode of an even ring sits at +N/2.
///
/// A Line is the same ring cut on the bond between the largest positive and the
/// most negative signed distance; hopping across that bond is an error.
class LatticeSpec {
   public:
    explicit LatticeSpec(int n_sites, Topology topology = Topology::Circle);

    int n_sites() const { return n_sites_; }
    Topology topology() const { return topology_; }
    /// Number of (site, spin) basis states, 2N.
    std::size_t dimension() const { return 2 * static_cast<std::size_t>(n_sites_); }
    /// Angular separation of neighbouring sites, 2*pi/N.
    double angular_step() const;

    int signed_distance(int site) const;
    /// Site angle wrapped to (-pi, pi].
    double angle(int site) const;
    /// Reduce any integer to a site index in [0, N).
    int wrap(int site) const;
    /// Site holding signed distance `d`; inverse of signed_distance().
    int site_at_distance(int d) const;

    /// Largest signed distance on the lattice (floor(N/2)).
    int max_distance() const { return n_sites_ / 2; }
    /// Most negative signed distance (-(ceil(N/2) - 1)).
    int min_distance() const { return max_distance() - n_sites_ + 1; }

    bool operator==(const LatticeSpec &) const = default;

   private:
    int n_sites_;
    Topology topology_;
};

/// Position of (site, spin) in the clockwise basis
/// {|0,dn>, |0,up>, |1,dn>, |1,up>, ..., |N-1,dn>, |N-1,up>}.
std::size_t basis_index(const LatticeSpec &spec, int site, Spin spin);
/// Inverse of basis_index.
std::pair<int, Spin> basis_site_spin(const LatticeSpec &spec, std::size_t index);

/// Normalized walker wavefunction over the clockwise basis.
class WalkerState {
   public:
    /// Takes ownership of `amplitudes`; they must already be normalized to 1e-12.
    WalkerState(LatticeSpec spec, std::vector<Complex> amplitudes);

    const LatticeSpec &spec() const { return spec_; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex amplitude(int site, Spin spin) const { return amplitudes_[basis_index(spec_, site, spin)]; }
    double norm_squared() const;

    /// Mutable view for in-place kernels. Callers must keep the state unitary.
    std::span<Complex> mutable_amplitudes() { return amplitudes_; }

    /// Throw InvariantViolation if |1 - ||psi||^2| exceeds `tolerance`.
    void check_normalized(double tolerance, std::string_view context) const;

   private:
    LatticeSpec spec_;
    std::vector<Complex> amplitudes_;
};

/// Walker sitting on one (site, spin) basis state.
WalkerState localized_state(const LatticeSpec &spec, int site, Spin spin);

struct StateTerm {
    int site;
    Spin spin;
    Complex amplitude;
};

/// Superposition of basis states, renormalized. Rejects duplicate (site, spin)
/// pairs and all-zero input.
WalkerState superposition_state(const LatticeSpec &spec, std::span<const StateTerm> terms);

}  // namespace qwalk

#endif  // QWALK_LATTICE_HPP
