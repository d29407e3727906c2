// Copyright 2026 The regen-capacity Authors
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

// Capacity of complete channel configurations: alphabet construction,
// transition model, input optimisation and (optionally) a scalar search
// over the lattice spacing. Shared by the command-line tool and the tests.
//
// All capacities are in bits per n-dimensional symbol with rho = S/N the
// per-dimension signal-to-noise ratio.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "regen/capacity.hpp"
#include "regen/constellation.hpp"
#include "regen/ideal_regen.hpp"
#include "regen/sine_channel.hpp"
#include "regen/transition_matrix.hpp"

namespace regen {

struct SearchSettings {
  int grid_points = 32;
  double rel_tol = 1e-3;  // relative tolerance on the optimised spacing
  BlahutArimotoOptions ba{1e-6};
  double scan_tol = 1e-4;  // capacity bracket during the grid scan, bits
  LatticeOptions lattice{};
};

struct LatticeCapacity {
  double capacity_bits = 0.0;
  int M = 0;  // symbols per dimension
  double spacing = 0.0;
  InputDistribution input;
};

struct OptimizedCapacity {
  double capacity_bits = 0.0;
  double spacing = 0.0;  // lattice spacing (ideal) or pitch 2 pi / beta (sine)
  int M = 0;
  OptimizationResult search;
};

/// Spacing bracket for the lattice search: [d_opt / 4, 4 d_opt], capped by
/// 2 sqrt(S) (the largest spacing an even lattice can afford at power S).
inline std::pair<double, double> spacing_bracket(double rho, const IdealChannelSpec& spec) {
  const double d_opt = optimal_cell(spec).d_opt;
  const double hi = std::min(4.0 * d_opt, 2.0 * std::sqrt(rho * spec.N) * (1.0 - 1e-9));
  const double lo = std::min(0.25 * d_opt, 0.25 * hi);
  return {lo, hi};
}

/// Ideal chain on an even, zero-mean lattice of the given spacing, input
/// optimised under the power constraint. M = 0 picks the size from the power.
inline LatticeCapacity ideal_lattice_capacity(double rho, const IdealChannelSpec& spec,
                                              double spacing, int m = 0,
                                              const BlahutArimotoOptions& ba = {}) {
  spec.validate();
  const double s = rho * spec.N;
  if (m == 0) m = lattice_size_for_power(s, spacing);
  const auto c = make_rectangular(m, spacing);
  const auto w1 = segment_matrix(c, spec);
  std::vector<double> costs(c.size());
  for (std::size_t l = 0; l < c.size(); ++l) costs[l] = c[l] * c[l];
  const auto r = c.size() >= 256 ? blahut_arimoto(SparseChannel(chain_sparse(w1, spec.R)), costs, s, ba)
                                 : blahut_arimoto(chain_matrix(w1, spec.R), costs, s, ba);
  return LatticeCapacity{spec.n * r.capacity_bits, m, spacing, r.input};
}

/// Ideal chain with spacing and input both optimised.
inline OptimizedCapacity ideal_optimized_capacity(double rho, const IdealChannelSpec& spec,
                                                  const SearchSettings& set = {}) {
  const auto [lo, hi] = spacing_bracket(rho, spec);
  auto objective = [&](double d) {
    return ideal_lattice_capacity(rho, spec, d, 0, set.ba).capacity_bits;
  };
  BlahutArimotoOptions coarse = set.ba;
  coarse.tol = std::max(set.ba.tol, set.scan_tol);
  auto scan = [&](double d) {
    return ideal_lattice_capacity(rho, spec, d, 0, coarse).capacity_bits;
  };
  OptimizedCapacity out;
  out.search = optimize_scalar(scan, objective, lo, hi, set.rel_tol * lo,
                               ScalarSearchOptions{set.grid_points, true});
  out.capacity_bits = out.search.best_capacity;
  out.spacing = out.search.best_parameter;
  out.M = lattice_size_for_power(rho * spec.N, out.spacing);
  return out;
}

/// Ideal chain on a fixed M-per-dimension lattice scaled to power S under
/// the uniform input; the input is then optimised within that power.
inline LatticeCapacity ideal_fixed_capacity(double rho, const IdealChannelSpec& spec, int m,
                                            const BlahutArimotoOptions& ba = {}) {
  const auto base = make_rectangular(m, 1.0);
  const auto u = uniform_distribution(base.size());
  const auto c = scale_to_power(base, u, rho * spec.N);
  return ideal_lattice_capacity(rho, spec, *c.spacing(), m, ba);
}

/// Ideal chain on an M-point ring of radius sqrt(n S). The wedge channel is
/// circulant, so the uniform input is optimal.
inline double ideal_ring_capacity(double rho, const IdealChannelSpec& spec, int m) {
  spec.validate();
  const auto ring = make_ring(m, std::sqrt(spec.n * rho * spec.N));
  const auto w = chain_matrix(ring_segment_matrix(ring, spec), spec.R);
  return mi_discrete(uniform_distribution(ring.size()), w);
}

/// Sine chain with stability index q on the fixed-point lattice of the given
/// pitch. The alphabet size follows from the power.
inline LatticeCapacity sine_lattice_capacity(double rho, double q, const IdealChannelSpec& line,
                                             double pitch, const SearchSettings& set = {}) {
  line.validate();
  const double s = rho * line.N;
  const auto map = SineMap::from_pitch(q, pitch);
  const auto spec = SineChannelSpec::equal_split(map, line.R, line.N, line.n);
  const auto resp = propagate_lattice(spec, set.lattice);
  const int m = lattice_size_for_power(s, pitch);
  const auto alphabet = sine_alphabet(map, m);
  std::vector<double> costs(alphabet.size());
  for (std::size_t l = 0; l < alphabet.size(); ++l) costs[l] = alphabet[l] * alphabet[l];
  ShiftChannel ch(resp.mass, static_cast<std::size_t>(resp.cells_per_pitch),
                  static_cast<std::size_t>(m));
  const auto r = blahut_arimoto(ch, costs, s, set.ba);
  return LatticeCapacity{line.n * r.capacity_bits, m, pitch, r.input};
}

/// Sine chain with the pitch (equivalently beta) and input optimised.
inline OptimizedCapacity sine_optimized_capacity(double rho, double q,
                                                 const IdealChannelSpec& line,
                                                 const SearchSettings& set = {}) {
  const auto [lo, hi] = spacing_bracket(rho, line);
  auto objective = [&](double pitch) {
    return sine_lattice_capacity(rho, q, line, pitch, set).capacity_bits;
  };
  SearchSettings coarse = set;
  coarse.ba.tol = std::max(set.ba.tol, set.scan_tol);
  auto scan = [&](double pitch) {
    return sine_lattice_capacity(rho, q, line, pitch, coarse).capacity_bits;
  };
  OptimizedCapacity out;
  out.search = optimize_scalar(scan, objective, lo, hi, set.rel_tol * lo,
                               ScalarSearchOptions{set.grid_points, true});
  out.capacity_bits = out.search.best_capacity;
  out.spacing = out.search.best_parameter;
  out.M = lattice_size_for_power(rho * line.N, out.spacing);
  return out;
}

}  // namespace regen
