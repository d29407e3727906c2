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

// Ideal (hard-decision) regenerator channel.
//
// Noise bookkeeping: a chain of R segments, each adding Gaussian noise of
// per-dimension variance N/R and then snapping to the nearest symbol. The
// signal-to-noise ratio is rho = S/N with S the per-dimension signal power,
// so the linear reference for an n-dimensional signal is
// (n/2) log2(1 + rho).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "regen/constellation.hpp"
#include "regen/errors.hpp"
#include "regen/numerics.hpp"
#include "regen/transition_matrix.hpp"

namespace regen {

struct IdealChannelSpec {
  int R = 1;       // regenerative segments
  double N = 1.0;  // accumulated noise power per dimension
  int n = 2;       // signal dimensions

  void validate() const {
    if (R < 1) throw DomainError("ideal channel: R must be >= 1");
    if (!(N > 0.0) || !std::isfinite(N)) {
      throw DomainError("ideal channel: N must be positive");
    }
    if (n != 1 && n != 2) throw DomainError("ideal channel: n must be 1 or 2");
  }

  double per_segment_variance() const { return N / R; }
};

/// Closed-form optimal lattice quantities for R segments.
struct AnalyticGain {
  double delta = 0.0;    // half cell width in units of sqrt(2 N/R)
  double d_opt = 0.0;    // optimal neighbour distance
  double snr_opt = 0.0;  // d_opt^2 / (4N)
  double gain_bits = 0.0;
};

namespace detail {

// (erf(b) - erf(a)) / 2 evaluated without cancellation in the tails.
inline double half_erf_difference(double a, double b) {
  if (!(a < b)) return 0.0;
  if (a >= 0.0) return 0.5 * (std::erfc(a) - std::erfc(b));
  if (b <= 0.0) return 0.5 * (std::erfc(-b) - std::erfc(-a));
  return 0.5 * (std::erf(b) - std::erf(a));
}

inline double omega_of(int r) {
  const double e2 = std::numbers::e * std::numbers::e;
  return lambert_w(e2 * r * r / (16.0 * std::numbers::pi));
}

}  // namespace detail

/// Single-segment transition matrix of an ideal regenerator over the
/// Voronoi cells of `c`.
inline TransitionMatrix segment_matrix(const Constellation1D& c,
                                       const IdealChannelSpec& spec) {
  spec.validate();
  const auto m = static_cast<Eigen::Index>(c.size());
  if (m < 2) throw DomainError("segment_matrix: need at least 2 symbols");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double scale = std::sqrt(spec.R / (8.0 * spec.N));
  const auto& x = c.points();
  Eigen::MatrixXd w(m, m);
  for (Eigen::Index l = 0; l < m; ++l) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const double up = k + 1 < m ? (x[k] + x[k + 1] - 2.0 * x[l]) * scale : inf;
      const double lo = k > 0 ? (x[k] + x[k - 1] - 2.0 * x[l]) * scale : -inf;
      w(k, l) = detail::half_erf_difference(lo, up);
    }
  }
  detail::normalize_columns(w);
  return TransitionMatrix(std::move(w));
}

/// Probability density of the polar angle of a 2-D Gaussian centred at
/// (a, 0) with per-dimension standard deviation s.
inline double offset_gaussian_angle_pdf(double theta, double a, double s) {
  const double u = a * std::cos(theta);
  const double v = a * std::sin(theta);
  const double base = std::exp(-0.5 * a * a / (s * s)) / (2.0 * std::numbers::pi);
  const double t = u / s;
  return base + t / std::sqrt(2.0 * std::numbers::pi) *
                    std::exp(-0.5 * v * v / (s * s)) * normal_cdf(t);
}

/// Single-segment transition matrix of an ideal regenerator on a ring
/// alphabet whose decision cells are angular wedges.
inline TransitionMatrix ring_segment_matrix(const Constellation2D& ring,
                                            const IdealChannelSpec& spec) {
  spec.validate();
  if (ring.kind() != Constellation2DKind::kRing) {
    throw DomainError("ring_segment_matrix: constellation is not a ring");
  }
  const auto m = static_cast<Eigen::Index>(ring.size());
  const double radius = std::abs(ring.points()[0]);
  const double theta0 = std::arg(ring.points()[0]);
  const double wedge = 2.0 * std::numbers::pi / static_cast<double>(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto expect = std::polar(radius, theta0 + wedge * static_cast<double>(k));
    if (std::abs(ring.points()[k] - expect) > 1e-9 * radius) {
      throw DomainError("ring_segment_matrix: points must be evenly spaced in order");
    }
  }
  const double s = std::sqrt(spec.per_segment_variance());
  auto pdf = [&](double th) { return offset_gaussian_angle_pdf(th, radius, s); };
  Eigen::VectorXd first(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double centre = wedge * static_cast<double>(k);
    first[k] = integrate_adaptive(pdf, centre - 0.5 * wedge, centre + 0.5 * wedge, 1e-12);
  }
  first = first.cwiseMax(0.0);
  first /= first.sum();
  Eigen::MatrixXd w(m, m);
  for (Eigen::Index l = 0; l < m; ++l) {
    for (Eigen::Index k = 0; k < m; ++k) w(k, l) = first[(k - l + m) % m];
  }
  return TransitionMatrix(std::move(w));
}

/// Low-SNR closed form for a binary-per-dimension ideal chain.
inline double low_snr_capacity(double rho, int r, int n) {
  if (!(rho >= 0.0)) throw DomainError("low_snr_capacity: rho must be >= 0");
  if (r < 1) throw DomainError("low_snr_capacity: R must be >= 1");
  const double single = 0.5 * (1.0 + std::erf(std::sqrt(r * rho / 2.0)));
  const double m_plus = std::pow(single, r);
  const double m_pm = 1.0 - m_plus;
  auto xlogx = [](double v) { return v > 0.0 ? v * std::log2(v) : 0.0; };
  const double c = n * (1.0 + xlogx(m_plus) + xlogx(m_pm));
  return std::clamp(c, 0.0, static_cast<double>(n));
}

/// Asymptotic capacity gain over the linear channel, as a function of R
/// and n only.
inline double regen_gain(const IdealChannelSpec& spec) {
  spec.validate();
  const double delta = std::sqrt(2.0 * detail::omega_of(spec.R));
  const double r = spec.R;
  const double n = spec.n;
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double err = r * std::exp(-delta * delta) / (delta * sqrt_pi);
  return 0.5 * n * std::log2(std::numbers::pi * std::numbers::e * r / (4.0 * delta)) +
         n * err * std::log2(err / 4.0);
}

inline AnalyticGain optimal_cell(const IdealChannelSpec& spec) {
  spec.validate();
  const double omega = detail::omega_of(spec.R);
  AnalyticGain g;
  g.delta = std::sqrt(2.0 * omega);
  const double d2 = 16.0 * spec.N / spec.R * omega;
  g.d_opt = std::sqrt(d2);
  g.snr_opt = d2 / (4.0 * spec.N);
  g.gain_bits = regen_gain(spec);
  return g;
}

/// Even lattice size whose outer points sit about seven standard deviations
/// of a signal of the given power away from the origin.
inline int lattice_size_for_power(double power, double spacing) {
  if (!(power > 0.0) || !(spacing > 0.0)) {
    throw DomainError("lattice_size_for_power: power and spacing must be positive");
  }
  const double half = std::ceil(7.0 * std::sqrt(power) / spacing);
  return 2 * std::max(1, static_cast<int>(half));
}

struct HighSnrTerms {
  std::vector<double> weights;  // Maxwell-Boltzmann output weights q_l
  double entropy_bits = 0.0;    // n * H(q)
  double correction_bits = 0.0; // nearest-neighbour error term, <= 0
  double total() const { return entropy_bits + correction_bits; }
};

/// High-SNR closed form on the d_opt lattice with Maxwell-Boltzmann
/// weights q_l ~ exp(-lambda x_l^2), lambda = 1 / (2 (S + N/R)).
inline HighSnrTerms high_snr_terms(const Constellation1D& c,
                                   const IdealChannelSpec& spec, double s) {
  spec.validate();
  if (!(s > 0.0)) throw DomainError("high_snr_capacity: S must be positive");
  if (!c.equidistant() || c.size() < 2) {
    throw DomainError("high_snr_capacity: constellation must be an equidistant lattice");
  }
  const AnalyticGain g = optimal_cell(spec);
  if (std::abs(*c.spacing() - g.d_opt) > 1e-6 * g.d_opt) {
    throw DomainError("high_snr_capacity: lattice spacing must equal d_opt");
  }
  const double lambda = 1.0 / (2.0 * (s + spec.per_segment_variance()));
  HighSnrTerms t;
  t.weights.resize(c.size());
  double z = 0.0;
  for (std::size_t l = 0; l < c.size(); ++l) {
    t.weights[l] = std::exp(-lambda * c[l] * c[l]);
    z += t.weights[l];
  }
  for (double& q : t.weights) q /= z;
  t.entropy_bits = spec.n * entropy_bits(t.weights);
  const double delta = g.delta;
  const double err = spec.R * std::exp(-delta * delta) / (delta * std::sqrt(std::numbers::pi));
  t.correction_bits = spec.n * err * std::log2(err / 4.0);
  return t;
}

inline double high_snr_capacity(const Constellation1D& c,
                                const IdealChannelSpec& spec, double s) {
  return high_snr_terms(c, spec, s).total();
}

/// Asymptotic gain of a sine-map chain with stability index q = alpha*beta.
inline double sine_asymptotic_gain(const IdealChannelSpec& spec, double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("sine_asymptotic_gain: q must lie in (0, 1]");
  }
  const double c = 1.0 - q;
  const double c2 = c * c;
  // sum_{k=0}^{R} c^(2k), written as a finite sum to stay exact at q = 1.
  double ratio = 0.0;
  double term = 1.0;
  for (int k = 0; k <= spec.R; ++k) {
    ratio += term;
    term *= c2;
  }
  return regen_gain(spec) - 0.5 * spec.n * std::log2(ratio);
}

enum class ConstellationFamily { kBinary, kRectangular };

struct InterpolatedCapacity {
  double value = 0.0;
  bool high_branch = false;
  double junction_gap = 0.0;  // |high - low| at rho = snr_opt
};

/// Piecewise analytic capacity: the low-SNR form up to snr_opt and the
/// high-SNR form on the d_opt lattice above it. Binary alphabets use the
/// low-SNR form throughout.
inline InterpolatedCapacity interpolated_capacity(double rho,
                                                  const IdealChannelSpec& spec,
                                                  ConstellationFamily family) {
  spec.validate();
  if (!(rho >= 0.0)) throw DomainError("interpolated_capacity: rho must be >= 0");
  const AnalyticGain g = optimal_cell(spec);
  auto high = [&](double r) {
    const double s = r * spec.N;
    const auto lattice =
        make_rectangular(lattice_size_for_power(s, g.d_opt), g.d_opt);
    return high_snr_capacity(lattice, spec, s);
  };
  InterpolatedCapacity out;
  if (family == ConstellationFamily::kBinary) {
    out.value = low_snr_capacity(rho, spec.R, spec.n);
    return out;
  }
  out.junction_gap =
      std::abs(high(g.snr_opt) - low_snr_capacity(g.snr_opt, spec.R, spec.n));
  if (rho <= g.snr_opt) {
    out.value = low_snr_capacity(rho, spec.R, spec.n);
  } else {
    out.value = high(rho);
    out.high_branch = true;
  }
  return out;
}

}  // namespace regen
