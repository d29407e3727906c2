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

// Signal alphabets and their decision geometry.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "regen/errors.hpp"

namespace regen {

/// Ordered one-dimensional alphabet (one quadrature of a rectangular
/// constellation). `spacing` is set when the points form an equidistant
/// lattice.
class Constellation1D {
 public:
  Constellation1D() = default;

  /// Validates strict ordering and detects equidistance.
  explicit Constellation1D(std::vector<double> points)
      : points_(std::move(points)) {
    if (points_.empty()) throw DomainError("constellation: no points");
    for (double x : points_) {
      if (!std::isfinite(x)) throw DomainError("constellation: non-finite point");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i] > points_[i - 1])) {
        throw DomainError("constellation: points must be strictly increasing");
      }
    }
    if (points_.size() >= 2) {
      const double d = (points_.back() - points_.front()) /
                       static_cast<double>(points_.size() - 1);
      bool equi = true;
      for (std::size_t i = 1; i < points_.size(); ++i) {
        if (std::abs(points_[i] - points_[i - 1] - d) > 1e-9 * d) {
          equi = false;
          break;
        }
      }
      if (equi) spacing_ = d;
    }
  }

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::optional<double> spacing() const { return spacing_; }
  bool equidistant() const { return spacing_.has_value(); }

  friend bool operator==(const Constellation1D&, const Constellation1D&) = default;

 private:
  std::vector<double> points_;
  std::optional<double> spacing_;
};

enum class Constellation2DKind { kRectangular, kRing };

/// Two-dimensional alphabet: either the Cartesian square of a 1-D lattice
/// or M points on a single ring.
class Constellation2D {
 public:
  using Point = std::complex<double>;

  Constellation2D() = default;
  Constellation2D(std::vector<Point> points, Constellation2DKind kind)
      : points_(std::move(points)), kind_(kind) {
    if (points_.empty()) throw DomainError("constellation: no points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      for (std::size_t j = i + 1; j < points_.size(); ++j) {
        if (points_[i] == points_[j]) {
          throw DomainError("constellation: duplicate point");
        }
      }
    }
  }

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  Constellation2DKind kind() const { return kind_; }

 private:
  std::vector<Point> points_;
  Constellation2DKind kind_ = Constellation2DKind::kRectangular;
};

/// Decision boundaries of a 1-D alphabet; boundaries[k], boundaries[k+1]
/// enclose symbol k, with infinite edge cells.
struct VoronoiCells1D {
  std::vector<double> boundaries;
};

/// M equidistant points symmetric about zero.
inline Constellation1D make_rectangular(int m_per_dim, double spacing) {
  if (m_per_dim < 2) throw DomainError("make_rectangular: M must be >= 2");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw DomainError("make_rectangular: spacing must be positive");
  }
  std::vector<double> pts(static_cast<std::size_t>(m_per_dim));
  const double offset = 0.5 * (m_per_dim - 1);
  for (int i = 0; i < m_per_dim; ++i) pts[i] = (i - offset) * spacing;
  return Constellation1D(std::move(pts));
}

/// Cartesian square of a 1-D lattice, row-major in (re, im).
inline Constellation2D make_rectangular_2d(const Constellation1D& axis) {
  std::vector<Constellation2D::Point> pts;
  pts.reserve(axis.size() * axis.size());
  for (double re : axis.points()) {
    for (double im : axis.points()) pts.emplace_back(re, im);
  }
  return Constellation2D(std::move(pts), Constellation2DKind::kRectangular);
}

/// M points at angles 2*pi*k/M on a ring of the given radius.
inline Constellation2D make_ring(int m, double radius) {
  if (m < 2) throw DomainError("make_ring: M must be >= 2");
  if (!(radius > 0.0)) throw DomainError("make_ring: radius must be positive");
  std::vector<Constellation2D::Point> pts;
  pts.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double a = 2.0 * std::numbers::pi * k / m;
    // Snap exact quarter turns so that ring(4) is exactly {1, i, -1, -i}.
    double c = std::cos(a), s = std::sin(a);
    if (4 * k % m == 0) {
      const int quarter = (4 * k / m) % 4;
      c = quarter == 0 ? 1.0 : quarter == 2 ? -1.0 : 0.0;
      s = quarter == 1 ? 1.0 : quarter == 3 ? -1.0 : 0.0;
    }
    pts.emplace_back(radius * c, radius * s);
  }
  return Constellation2D(std::move(pts), Constellation2DKind::kRing);
}

/// Average power sum_l p_l |x_l|^2.
inline double mean_power(const Constellation1D& c, std::span<const double> p) {
  if (p.size() != c.size()) throw DomainError("mean_power: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * c[i] * c[i];
  return s;
}

inline double mean_power(const Constellation2D& c, std::span<const double> p) {
  if (p.size() != c.size()) throw DomainError("mean_power: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * std::norm(c.points()[i]);
  return s;
}

inline std::vector<double> uniform_distribution(std::size_t m) {
  return std::vector<double>(m, 1.0 / static_cast<double>(m));
}

/// Rescales the alphabet so that its mean power under `p` equals
/// `target_power`.
inline Constellation1D scale_to_power(const Constellation1D& c,
                                      std::span<const double> p,
                                      double target_power) {
  const double pw = mean_power(c, p);
  if (!(pw > 0.0)) throw DomainError("scale_to_power: zero-power constellation");
  if (!(target_power > 0.0)) throw DomainError("scale_to_power: target must be positive");
  const double k = std::sqrt(target_power / pw);
  if (k == 1.0) return c;
  std::vector<double> pts = c.points();
  for (double& x : pts) x *= k;
  return Constellation1D(std::move(pts));
}

inline Constellation2D scale_to_power(const Constellation2D& c,
                                      std::span<const double> p,
                                      double target_power) {
  const double pw = mean_power(c, p);
  if (!(pw > 0.0)) throw DomainError("scale_to_power: zero-power constellation");
  if (!(target_power > 0.0)) throw DomainError("scale_to_power: target must be positive");
  const double k = std::sqrt(target_power / pw);
  if (k == 1.0) return c;
  auto pts = c.points();
  for (auto& z : pts) z *= k;
  return Constellation2D(std::move(pts), c.kind());
}

inline VoronoiCells1D voronoi_1d(const Constellation1D& c) {
  if (c.size() < 2) throw DomainError("voronoi_1d: need at least 2 points");
  VoronoiCells1D v;
  v.boundaries.reserve(c.size() + 1);
  v.boundaries.push_back(-std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    v.boundaries.push_back(0.5 * (c[k] + c[k + 1]));
  }
  v.boundaries.push_back(std::numeric_limits<double>::infinity());
  return v;
}

/// Index of the closest symbol. A point exactly on a boundary goes to the
/// lower index.
inline std::size_t nearest_symbol(const Constellation1D& c, double z) {
  const auto& x = c.points();
  // First symbol whose upper boundary is >= z.
  std::size_t lo = 0, hi = x.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (z <= 0.5 * (x[mid] + x[mid + 1])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

inline std::size_t nearest_symbol(const Constellation2D& c,
                                  Constellation2D::Point z) {
  std::size_t best = 0;
  double best_d = std::norm(z - c.points()[0]);
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double d = std::norm(z - c.points()[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// JSON form used in run configs: {"kind": ..., "points": [...], "spacing": d}.
// 1-D points are numbers; 2-D points are [re, im] pairs.

inline void to_json(nlohmann::json& j, const Constellation1D& c) {
  j = nlohmann::json{{"kind", "lattice"}, {"points", c.points()}};
  if (c.spacing()) j["spacing"] = *c.spacing();
}

inline void from_json(const nlohmann::json& j, Constellation1D& c) {
  if (j.value("kind", std::string("lattice")) != "lattice") {
    throw ConfigError("constellation: expected kind 'lattice'");
  }
  c = Constellation1D(j.at("points").get<std::vector<double>>());
}

inline void to_json(nlohmann::json& j, const Constellation2D& c) {
  auto arr = nlohmann::json::array();
  for (const auto& z : c.points()) arr.push_back({z.real(), z.imag()});
  j = nlohmann::json{
      {"kind", c.kind() == Constellation2DKind::kRing ? "ring" : "rectangular"},
      {"points", std::move(arr)}};
}

inline void from_json(const nlohmann::json& j, Constellation2D& c) {
  const auto kind = j.at("kind").get<std::string>();
  Constellation2DKind k;
  if (kind == "ring") {
    k = Constellation2DKind::kRing;
  } else if (kind == "rectangular") {
    k = Constellation2DKind::kRectangular;
  } else {
    throw ConfigError("constellation: unknown kind '" + kind + "'");
  }
  std::vector<Constellation2D::Point> pts;
  for (const auto& p : j.at("points")) {
    pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  }
  c = Constellation2D(std::move(pts), k);
}

}  // namespace regen
