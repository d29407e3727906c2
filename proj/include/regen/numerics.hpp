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

// Special functions and quadrature shared by the channel models.
//
// Variances are always stated in the standard convention: a Gaussian of
// variance v has peak 1/sqrt(2*pi*v). Callers that start from a noise power
// N_k written as exp(-|y-m|^2/N_k)/sqrt(pi*N_k) pass v = N_k/2.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "regen/errors.hpp"

namespace regen {

inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kLog2e = std::numbers::log2e;

/// Error function. Backed by the C library, which is accurate to a few ulp
/// over the whole real line.
inline double erf(double x) { return std::erf(x); }

/// Complementary error function, accurate in the far tail where 1 - erf
/// would cancel.
inline double erfc(double x) { return std::erfc(x); }

/// Standard normal CDF.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// P(a < Z < b) for a standard normal Z, evaluated on the side of the
/// distribution where neither CDF value is close to one.
inline double normal_interval(double a, double b) {
  if (!(a < b)) return 0.0;
  if (a >= 0.0) {
    return 0.5 * (std::erfc(a / std::numbers::sqrt2) -
                  std::erfc(b / std::numbers::sqrt2));
  }
  if (b <= 0.0) {
    return 0.5 * (std::erfc(-b / std::numbers::sqrt2) -
                  std::erfc(-a / std::numbers::sqrt2));
  }
  return 0.5 * (std::erf(b / std::numbers::sqrt2) -
                std::erf(a / std::numbers::sqrt2));
}

/// Principal branch of the Lambert W function for x >= 0.
///
/// Halley iteration started from log(1 + x); stops once the step falls
/// below 1e-13 relative to max(1, |w|).
inline double lambert_w(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw DomainError("lambert_w: argument must be >= 0, got " +
                      std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  double w = std::log1p(x);
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(w))) {
      // One Newton polish: Halley's last step leaves ~1 ulp of slack.
      const double e2 = std::exp(w);
      const double d = e2 * (w + 1.0);
      if (d != 0.0) w -= (w * e2 - x) / d;
      return w;
    }
  }
  throw ConvergenceError("lambert_w: Halley iteration did not converge");
}

/// Gaussian density with the given mean and variance.
inline double gaussian_pdf(double y, double mean, double variance) {
  if (!(variance > 0.0)) {
    throw DomainError("gaussian_pdf: variance must be positive");
  }
  const double d = y - mean;
  return std::exp(-0.5 * d * d / variance) /
         std::sqrt(2.0 * std::numbers::pi * variance);
}

/// Shannon entropy in bits, with 0*log(0) taken as 0.
inline double entropy_bits(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw DomainError("entropy_bits: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("entropy_bits: probabilities sum to " +
                      std::to_string(total));
  }
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::max(h, 0.0);
}

/// Binary entropy function H2(p) in bits.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

enum class QuadratureRule { kTrapezoid, kGaussLegendre };

struct QuadratureSpec {
  double lower = -1.0;
  double upper = 1.0;
  int points = 16;
  QuadratureRule rule = QuadratureRule::kTrapezoid;

  void validate() const {
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
      throw ConfigError("quadrature: need finite lower < upper");
    }
    if (points < 16) throw ConfigError("quadrature: points must be >= 16");
  }
};

namespace detail {

struct GaussLegendre16 {
  std::array<double, 16> nodes{};
  std::array<double, 16> weights{};

  GaussLegendre16() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule;
  return rule;
}

}  // namespace detail

/// Fixed-rule quadrature over [lower, upper].
///
/// kTrapezoid uses `points` equispaced nodes including both ends;
/// kGaussLegendre splits the interval into ceil(points / 16) panels of a
/// 16-point Gauss-Legendre rule.
template <class F>
double integrate(F&& f, const QuadratureSpec& spec) {
  spec.validate();
  const double a = spec.lower;
  const double b = spec.upper;
  if (spec.rule == QuadratureRule::kTrapezoid) {
    const int n = spec.points;
    const double h = (b - a) / (n - 1);
    double sum = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n - 1; ++i) sum += f(a + i * h);
    return sum * h;
  }
  const auto& gl = detail::gauss_legendre16();
  const int panels = (spec.points + 15) / 16;
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    double part = 0.0;
    for (int i = 0; i < 16; ++i) {
      part += gl.weights[i] * f(mid + 0.5 * width * gl.nodes[i]);
    }
    sum += 0.5 * width * part;
  }
  return sum;
}

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(F& f, double a, double b, double& result, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  result = kronrod * h;
  error = std::abs((kronrod - gauss) * h);
}

template <class F>
double adaptive(F& f, double a, double b, double tol, int depth) {
  double r = 0.0, e = 0.0;
  gk15(f, a, b, r, e);
  if (e <= tol || depth >= 50) return r;
  const double m = 0.5 * (a + b);
  return adaptive(f, a, m, 0.5 * tol, depth + 1) +
         adaptive(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration to an absolute tolerance.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_adaptive(f, b, a, abs_tol);
  return detail::adaptive(f, a, b, abs_tol, 0);
}

}  // namespace regen
