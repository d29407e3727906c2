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

// Smooth regenerative channel built from the sine map T(x) = x + a sin(b x).
//
// The signal is a per-quadrature stochastic map
//   y_0 = x + eta_0,  y_k = T(y_{k-1}) + eta_k,  k = 1..R,
// so there are R + 1 noise injections. By default each has per-dimension
// variance N / (R + 1), which makes the accumulated noise N as in the
// linear reference. (The ideal regenerator instead uses R injections of
// N / R; the two conventions are kept separate on purpose.)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "regen/constellation.hpp"
#include "regen/errors.hpp"
#include "regen/format.hpp"
#include "regen/numerics.hpp"
#include "regen/random.hpp"

namespace regen {

/// Transfer function x + alpha sin(beta x). alpha = 0 is the linear channel.
struct SineMap {
  double alpha = 0.0;
  double beta = 1.0;

  void validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
      throw DomainError("sine map: alpha must be finite and >= 0");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw DomainError("sine map: beta must be finite and > 0");
    }
  }

  /// Stability index alpha * beta.
  double q() const { return alpha * beta; }
  /// Distance between neighbouring stable fixed points.
  double pitch() const { return 2.0 * std::numbers::pi / beta; }

  static SineMap from_q(double q, double beta) { return SineMap{q / beta, beta}; }
  static SineMap from_pitch(double q, double pitch) {
    return from_q(q, 2.0 * std::numbers::pi / pitch);
  }
};

inline double transfer(const SineMap& map, double x) {
  return x + map.alpha * std::sin(map.beta * x);
}

struct StabilityReport {
  double first_fixed_point = 0.0;  // pi / beta
  double pitch = 0.0;              // 2 pi / beta
  double derivative_at_fp = 0.0;   // 1 - alpha beta
  double second_derivative_at_fp = 0.0;
  bool stable = false;       // alpha beta <= 1
  bool superstable = false;  // alpha beta == 1

  /// The k-th fixed point pi (2k + 1) / beta.
  double fixed_point(long k) const {
    return first_fixed_point * static_cast<double>(2 * k + 1);
  }
};

/// Fixed points and their stability. `stable` uses alpha*beta <= 1, the
/// condition under which T is monotone; the raw derivative 1 - alpha*beta
/// is reported alongside for callers that want |T'| < 1 instead.
inline StabilityReport stability_report(const SineMap& map) {
  map.validate();
  StabilityReport r;
  r.first_fixed_point = std::numbers::pi / map.beta;
  r.pitch = map.pitch();
  const double q = map.q();
  r.derivative_at_fp = 1.0 - q;
  // T''(x*) = -alpha beta^2 sin(pi (2k + 1)) vanishes identically.
  r.second_derivative_at_fp = 0.0;
  r.stable = q <= 1.0 + 1e-12;
  r.superstable = std::abs(q - 1.0) <= 1e-12;
  return r;
}

/// M consecutive fixed points pi (2k + 1) / beta centred on the origin.
inline Constellation1D sine_alphabet(const SineMap& map, int m) {
  map.validate();
  if (m < 2) throw DomainError("sine_alphabet: M must be >= 2");
  const double base = std::numbers::pi / map.beta;
  std::vector<double> pts(static_cast<std::size_t>(m));
  const long first = -static_cast<long>(m / 2);
  for (int i = 0; i < m; ++i) pts[i] = base * static_cast<double>(2 * (first + i) + 1);
  return Constellation1D(std::move(pts));
}

struct SineChannelSpec {
  SineMap map;
  int R = 1;
  double N = 1.0;  // accumulated noise power per dimension
  int n = 2;
  std::vector<double> stage_variances;  // R + 1 entries, injections 0..R

  /// Equal split of N over the R + 1 injections.
  static SineChannelSpec equal_split(SineMap map, int r, double noise, int n = 2) {
    SineChannelSpec s;
    s.map = map;
    s.R = r;
    s.N = noise;
    s.n = n;
    if (r >= 1) s.stage_variances.assign(static_cast<std::size_t>(r) + 1, noise / (r + 1));
    s.validate();
    return s;
  }

  void validate() const {
    map.validate();
    if (R < 1) throw DomainError("sine channel: R must be >= 1");
    if (!(N >= 0.0) || !std::isfinite(N)) throw DomainError("sine channel: N must be >= 0");
    if (n != 1 && n != 2) throw DomainError("sine channel: n must be 1 or 2");
    if (stage_variances.size() != static_cast<std::size_t>(R) + 1) {
      throw DomainError("sine channel: need R + 1 stage variances");
    }
    double sum = 0.0;
    for (double v : stage_variances) {
      if (!(v >= 0.0)) throw DomainError("sine channel: negative stage variance");
      sum += v;
    }
    if (std::abs(sum - N) > 1e-12 * std::max(1.0, N)) {
      throw DomainError("sine channel: stage variances must sum to N");
    }
  }

  double min_stage_variance() const {
    return *std::min_element(stage_variances.begin(), stage_variances.end());
  }
};

/// Conditional output densities P(y_R | x_l) sampled at the cell centres of
/// a uniform axis.
struct DensityGrid {
  std::vector<double> axis;  // cell centres
  double step = 0.0;
  std::vector<std::vector<double>> densities;  // one per input symbol

  /// Trapezoid-rule integral of density l over the axis.
  double integral(std::size_t l) const {
    const auto& d = densities.at(l);
    if (d.empty()) return 0.0;
    double s = 0.0;
    for (double v : d) s += v;
    s -= 0.5 * (d.front() + d.back());
    return s * step;
  }
};

namespace detail {

// Uniform cell partition; edges are (i - count/2) h + mid, so a grid with
// mid = 0 is exactly mirror-symmetric.
struct CellAxis {
  double mid = 0.0;
  double h = 1.0;
  int count = 0;

  double edge(long i) const {
    return mid + h * (static_cast<double>(i) - 0.5 * count);
  }
  double center(long i) const {
    return mid + h * (static_cast<double>(i) + 0.5 - 0.5 * count);
  }
};

inline constexpr double kKernelReach = 12.0;  // kernel truncated at 12 sigma
inline constexpr double kNegligibleMass = 1e-40;

// Adds weight * P(t + sigma Z in cell i) to out[i]; mass falling outside the
// axis is added to `leaked`.
inline void deposit(const CellAxis& ax, double t, double sigma, double weight,
                    std::vector<double>& out, double& leaked) {
  if (sigma == 0.0) {
    const double pos = (t - ax.edge(0)) / ax.h;
    const long i = static_cast<long>(std::floor(pos));
    if (i >= 0 && i < ax.count) {
      out[static_cast<std::size_t>(i)] += weight;
    } else {
      leaked += weight;
    }
    return;
  }
  const double lo_pos = (t - kKernelReach * sigma - ax.edge(0)) / ax.h;
  const double hi_pos = (t + kKernelReach * sigma - ax.edge(0)) / ax.h;
  const long i0 = std::max(0L, static_cast<long>(std::floor(lo_pos)));
  const long i1 = std::min(static_cast<long>(ax.count), static_cast<long>(std::ceil(hi_pos)));
  const double inv = 1.0 / (sigma * std::numbers::sqrt2);
  // Edge values kept on the accurate side: lower-tail CDF for z < 0,
  // upper-tail for z >= 0.
  auto tail = [&](double e, bool& upper) {
    const double z = (e - t) * inv;
    upper = z >= 0.0;
    return upper ? 0.5 * std::erfc(z) : 0.5 * std::erfc(-z);
  };
  if (i0 >= i1) {
    leaked += weight;
    return;
  }
  bool up_prev = false;
  double v_prev = tail(ax.edge(i0), up_prev);
  double inside = 0.0;
  for (long i = i0; i < i1; ++i) {
    bool up = false;
    const double v = tail(ax.edge(i + 1), up);
    double p;
    if (!up_prev && !up) {
      p = v - v_prev;
    } else if (up_prev && up) {
      p = v_prev - v;
    } else {
      p = 1.0 - v_prev - v;
    }
    p = std::max(p, 0.0);
    out[static_cast<std::size_t>(i)] += weight * p;
    inside += p;
    v_prev = v;
    up_prev = up;
  }
  leaked += weight * std::max(0.0, 1.0 - inside);
}

// Cell masses of y_R for a single input x.
inline std::vector<double> propagate_masses(const SineChannelSpec& spec,
                                            const CellAxis& ax, double x,
                                            double& leaked) {
  std::vector<double> mass(static_cast<std::size_t>(ax.count), 0.0);
  std::vector<double> next(mass.size(), 0.0);
  deposit(ax, x, std::sqrt(spec.stage_variances[0]), 1.0, mass, leaked);
  for (int k = 1; k <= spec.R; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    const double sigma = std::sqrt(spec.stage_variances[static_cast<std::size_t>(k)]);
    for (long j = 0; j < ax.count; ++j) {
      const double w = mass[static_cast<std::size_t>(j)];
      if (w == 0.0) continue;
      if (w < kNegligibleMass) {
        leaked += w;
        continue;
      }
      deposit(ax, transfer(spec.map, ax.center(j)), sigma, w, next, leaked);
    }
    mass.swap(next);
  }
  return mass;
}

}  // namespace detail

/// Default axis [-L, L] with L = max|x_l| + alpha + 8 sqrt(N), doubling the
/// point count from `points` until every stage deviation spans at least
/// eight cells.
inline QuadratureSpec default_density_grid(const SineChannelSpec& spec,
                                           const Constellation1D& c,
                                           int points = 4096) {
  spec.validate();
  double max_abs = 0.0;
  for (double x : c.points()) max_abs = std::max(max_abs, std::abs(x));
  const double l = max_abs + spec.map.alpha + 8.0 * std::sqrt(spec.N);
  const double sigma = std::sqrt(spec.min_stage_variance());
  int g = std::max(points, 16);
  while (sigma > 0.0 && 2.0 * l / g > sigma / 8.0) g *= 2;
  return QuadratureSpec{-l, l, g, QuadratureRule::kTrapezoid};
}

/// Conditional densities of y_R for every symbol of `c` on the cells of
/// `grid` ([lower, upper] split into `points` cells).
///
/// Each stage moves the mass of every cell to T(cell centre) and spreads it
/// with the exact Gaussian cell probabilities of that stage.
inline DensityGrid propagate_density(const SineChannelSpec& spec,
                                     const Constellation1D& c,
                                     const QuadratureSpec& grid) {
  spec.validate();
  grid.validate();
  const double sigma_min = std::sqrt(spec.min_stage_variance());
  if (!(sigma_min > 0.0)) {
    throw ConfigError("propagate_density: all stage variances must be positive");
  }
  detail::CellAxis ax{0.5 * (grid.lower + grid.upper),
                      (grid.upper - grid.lower) / grid.points, grid.points};
  if (ax.h > sigma_min / 8.0) {
    throw ConfigError("propagate_density: grid too coarse (need >= 8 cells per noise std)");
  }
  const double sigma0 = std::sqrt(spec.stage_variances[0]);
  for (double x : c.points()) {
    if (x < grid.lower + 6.0 * sigma0 || x > grid.upper - 6.0 * sigma0) {
      throw ConfigError("propagate_density: symbol too close to the grid edge");
    }
  }
  DensityGrid out;
  out.step = ax.h;
  out.axis.resize(static_cast<std::size_t>(ax.count));
  for (long i = 0; i < ax.count; ++i) out.axis[static_cast<std::size_t>(i)] = ax.center(i);
  for (double x : c.points()) {
    double leaked = 0.0;
    auto mass = detail::propagate_masses(spec, ax, x, leaked);
    if (leaked > 1e-6) {
      throw AccuracyError("propagate_density: " + format_number(leaked) +
                          " of the mass left the grid");
    }
    for (double& v : mass) v /= ax.h;
    out.densities.push_back(std::move(mass));
  }
  return out;
}

/// Output cell masses for one symbol sitting on a fixed point, on a window
/// whose cells tile the lattice pitch exactly. The sine chain commutes with
/// translation by one pitch, so this single response determines the
/// conditional output of every lattice symbol.
struct LatticeResponse {
  std::vector<double> mass;  // cell masses, centre cell holds the symbol
  int cells_per_pitch = 0;
  long center = 0;
  double cell_width = 0.0;
  double pitch = 0.0;
  double leaked = 0.0;
};

struct LatticeOptions {
  int min_cells_per_pitch = 16;
  double cells_per_sigma = 8.0;
  double leak_tolerance = 1e-9;
};

inline LatticeResponse propagate_lattice(const SineChannelSpec& spec,
                                         const LatticeOptions& opt = {}) {
  spec.validate();
  const double sigma_min = std::sqrt(spec.min_stage_variance());
  if (!(sigma_min > 0.0)) {
    throw ConfigError("propagate_lattice: all stage variances must be positive");
  }
  const double pitch = spec.map.pitch();
  const int per_pitch = std::max(
      opt.min_cells_per_pitch,
      static_cast<int>(std::ceil(opt.cells_per_sigma * pitch / sigma_min)));
  const double h = pitch / per_pitch;
  const double x0 = std::numbers::pi / spec.map.beta;
  long half = static_cast<long>(
      std::ceil((spec.map.alpha + 8.0 * std::sqrt(spec.N) + pitch) / h));
  for (int attempt = 0; attempt < 6; ++attempt) {
    detail::CellAxis ax{x0, h, static_cast<int>(2 * half + 1)};
    double leaked = 0.0;
    auto mass = detail::propagate_masses(spec, ax, x0, leaked);
    if (leaked <= opt.leak_tolerance) {
      LatticeResponse r;
      r.mass = std::move(mass);
      r.cells_per_pitch = per_pitch;
      r.center = half;
      r.cell_width = h;
      r.pitch = pitch;
      r.leaked = leaked;
      return r;
    }
    half = half * 3 / 2 + 1;
  }
  throw AccuracyError("propagate_lattice: window keeps leaking mass");
}

/// Samples of y_R for `num_paths` independent realisations of the
/// stochastic map started at x.
inline std::vector<double> monte_carlo_paths(const SineChannelSpec& spec, double x,
                                             std::size_t num_paths,
                                             std::uint64_t seed) {
  spec.validate();
  if (num_paths < 1) throw DomainError("monte_carlo_paths: need at least one path");
  std::vector<double> sd(spec.stage_variances.size());
  for (std::size_t k = 0; k < sd.size(); ++k) sd[k] = std::sqrt(spec.stage_variances[k]);
  std::vector<double> out(num_paths);
  for (std::size_t b0 = 0; b0 < num_paths; b0 += kPathBlock) {
    NormalStream rng(seed, b0 / kPathBlock);
    const std::size_t b1 = std::min(num_paths, b0 + kPathBlock);
    for (std::size_t i = b0; i < b1; ++i) {
      double y = x + sd[0] * rng.normal();
      for (int k = 1; k <= spec.R; ++k) {
        y = transfer(spec.map, y) + sd[static_cast<std::size_t>(k)] * rng.normal();
      }
      out[i] = y;
    }
  }
  return out;
}

/// Sum of squared one-step residuals of a path y_0..y_R started at x,
/// including the (y_0 - x)^2 injection term.
inline double path_action(const SineChannelSpec& spec, std::span<const double> path,
                          double x) {
  if (path.size() != static_cast<std::size_t>(spec.R) + 1) {
    throw DomainError("path_action: path must have R + 1 points");
  }
  double s = (path[0] - x) * (path[0] - x);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double r = path[k] - transfer(spec.map, path[k - 1]);
    s += r * r;
  }
  return s;
}

/// Log of the joint density of a path under the per-stage Gaussian kernels.
inline double path_log_density(const SineChannelSpec& spec,
                               std::span<const double> path, double x) {
  if (path.size() != static_cast<std::size_t>(spec.R) + 1) {
    throw DomainError("path_log_density: path must have R + 1 points");
  }
  double s = std::log(gaussian_pdf(path[0], x, spec.stage_variances[0]));
  for (std::size_t k = 1; k < path.size(); ++k) {
    s += std::log(gaussian_pdf(path[k], transfer(spec.map, path[k - 1]),
                               spec.stage_variances[k]));
  }
  return s;
}

/// CSV export: column y, then one density column per input symbol.
inline void write_density_csv(const DensityGrid& grid, std::ostream& os) {
  os << "y";
  for (std::size_t l = 0; l < grid.densities.size(); ++l) os << ",p" << l;
  os << '\n';
  for (std::size_t i = 0; i < grid.axis.size(); ++i) {
    os << format_number(grid.axis[i]);
    for (const auto& d : grid.densities) os << ',' << format_number(d[i]);
    os << '\n';
  }
}

}  // namespace regen
