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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "regen/capacity.hpp"
#include "regen/errors.hpp"
#include "regen/sine_channel.hpp"

namespace regen {
namespace {

constexpr double kPi = std::numbers::pi;

double mean_of(const DensityGrid& d, std::size_t l) {
  double m = 0.0, z = 0.0;
  for (std::size_t i = 0; i < d.axis.size(); ++i) {
    m += d.axis[i] * d.densities[l][i];
    z += d.densities[l][i];
  }
  return m / z;
}

double variance_of(const DensityGrid& d, std::size_t l, double about) {
  double v = 0.0, z = 0.0;
  for (std::size_t i = 0; i < d.axis.size(); ++i) {
    v += (d.axis[i] - about) * (d.axis[i] - about) * d.densities[l][i];
    z += d.densities[l][i];
  }
  return v / z;
}

TEST(Transfer, Basics) {
  const auto m = SineMap::from_q(1.0, 3.0);
  EXPECT_NEAR(transfer(m, kPi / 3.0), kPi / 3.0, 1e-15);
  EXPECT_EQ(transfer(m, 0.0), 0.0);
  for (double x : {-2.0, 0.1, 0.7, 5.0}) {
    EXPECT_EQ(transfer(SineMap{0.0, 3.0}, x), x);
    EXPECT_EQ(transfer(m, -x), -transfer(m, x));
  }
  EXPECT_THROW(SineMap({-1.0, 1.0}).validate(), DomainError);
  EXPECT_THROW(SineMap({1.0, 0.0}).validate(), DomainError);
}

TEST(Stability, Examples) {
  const auto s1 = stability_report(SineMap{1.0 / 3.0, 3.0});
  EXPECT_NEAR(s1.derivative_at_fp, 0.0, 1e-15);
  EXPECT_TRUE(s1.stable);
  EXPECT_TRUE(s1.superstable);
  const auto s2 = stability_report(SineMap{1.0 / 6.0, 3.0});
  EXPECT_NEAR(s2.derivative_at_fp, 0.5, 1e-15);
  EXPECT_TRUE(s2.stable);
  EXPECT_FALSE(s2.superstable);
  const auto s3 = stability_report(SineMap{1.0, 1.5});
  EXPECT_FALSE(s3.stable);
  EXPECT_NEAR(s3.derivative_at_fp, -0.5, 1e-15);
  EXPECT_EQ(s3.second_derivative_at_fp, 0.0);
}

TEST(Stability, FixedPointsAreFixed) {
  const auto m = SineMap::from_q(0.7, 2.5);
  const auto s = stability_report(m);
  for (long k = -4; k <= 4; ++k) {
    const double x = s.fixed_point(k);
    EXPECT_NEAR(x, kPi * (2 * k + 1) / 2.5, 1e-14);
    EXPECT_NEAR(transfer(m, x), x, 1e-13);
    const double h = 1e-4;
    const double d2 = (transfer(m, x + h) - 2 * transfer(m, x) + transfer(m, x - h)) / (h * h);
    EXPECT_NEAR(d2, 0.0, 1e-5);
  }
}

TEST(Contraction, SuperstableIsFaster) {
  const double beta = 3.0;
  const double x = kPi / beta;
  for (double delta : {0.1, 0.3, 0.5}) {
    double a = x + delta, b = x + delta;
    for (int i = 0; i < 100; ++i) {
      a = transfer(SineMap::from_q(1.0, beta), a);
      b = transfer(SineMap::from_q(0.5, beta), b);
    }
    EXPECT_NEAR(a, x, 1e-12);
    EXPECT_NEAR(b, x, 1e-12);
    double a5 = x + delta, b5 = x + delta;
    for (int i = 0; i < 5; ++i) {
      a5 = transfer(SineMap::from_q(1.0, beta), a5);
      b5 = transfer(SineMap::from_q(0.5, beta), b5);
    }
    EXPECT_LT(std::abs(a5 - x), std::abs(b5 - x));
  }
}

TEST(SineAlphabet, Examples) {
  const auto a3 = sine_alphabet(SineMap::from_q(1.0, 3.0), 2);
  EXPECT_NEAR(a3[0], -kPi / 3.0, 1e-15);
  EXPECT_NEAR(a3[1], kPi / 3.0, 1e-15);
  const auto a2 = sine_alphabet(SineMap::from_q(1.0, 2.0), 2);
  EXPECT_NEAR(a2[1], kPi / 2.0, 1e-15);
  const auto a8 = sine_alphabet(SineMap::from_q(1.0, 3.0), 8);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_NEAR(a8[i] - a8[i - 1], 2.0 * kPi / 3.0, 1e-14);
  EXPECT_NEAR(a8[0], -a8[7], 1e-14);
  EXPECT_THROW(sine_alphabet(SineMap::from_q(1.0, 3.0), 1), DomainError);
}

TEST(ChannelSpec, EqualSplit) {
  const auto s = SineChannelSpec::equal_split(SineMap::from_q(1.0, 3.0), 4, 2.5, 2);
  ASSERT_EQ(s.stage_variances.size(), 5u);
  for (double v : s.stage_variances) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_THROW(SineChannelSpec::equal_split(SineMap::from_q(1.0, 3.0), 0, 1.0), DomainError);
}

TEST(PropagateDensity, LinearChannelAddsVariances) {
  const auto spec = SineChannelSpec::equal_split(SineMap{0.0, 3.0}, 1, 1.0, 2);
  const Constellation1D c(std::vector<double>{0.4});
  const auto d = propagate_density(spec, c, default_density_grid(spec, c, 4096));
  EXPECT_NEAR(d.integral(0), 1.0, 1e-6);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.axis.size(); ++i)
    worst = std::max(worst, std::abs(d.densities[0][i] - gaussian_pdf(d.axis[i], 0.4, 1.0)));
  EXPECT_LT(worst, 1e-5);
}

TEST(PropagateDensity, SmallNoiseFollowsIteration) {
  const auto map = SineMap::from_q(1.0, 3.0);
  const auto spec = SineChannelSpec::equal_split(map, 5, 1e-6, 2);
  const Constellation1D c(std::vector<double>{0.5});
  const auto d = propagate_density(spec, c, QuadratureSpec{0.0, 1.5, 1 << 16});
  double y = 0.5;
  for (int k = 0; k < 5; ++k) y = transfer(map, y);
  EXPECT_NEAR(mean_of(d, 0), y, 1e-4);
  EXPECT_LT(variance_of(d, 0, y), 1e-6);
}

TEST(PropagateDensity, Normalized) {
  for (double q : {0.5, 1.0}) {
    const auto spec = SineChannelSpec::equal_split(SineMap::from_q(q, 3.0), 10, 0.8, 2);
    const auto c = sine_alphabet(spec.map, 4);
    const auto d = propagate_density(spec, c, default_density_grid(spec, c, 2048));
    for (std::size_t l = 0; l < 4; ++l) {
      EXPECT_NEAR(d.integral(l), 1.0, 1e-6);
      for (double v : d.densities[l]) EXPECT_GE(v, 0.0);
    }
  }
}

TEST(PropagateDensity, MirrorSymmetry) {
  const auto spec = SineChannelSpec::equal_split(SineMap::from_q(0.8, 2.0), 6, 0.5, 2);
  const auto c = sine_alphabet(spec.map, 4);
  const auto d = propagate_density(spec, c, default_density_grid(spec, c, 2048));
  const std::size_t g = d.axis.size();
  for (std::size_t i = 0; i < g; ++i) {
    EXPECT_NEAR(d.densities[0][i], d.densities[3][g - 1 - i], 1e-12);
    EXPECT_NEAR(d.densities[1][i], d.densities[2][g - 1 - i], 1e-12);
  }
}

TEST(PropagateDensity, Rejects) {
  const auto spec = SineChannelSpec::equal_split(SineMap::from_q(1.0, 3.0), 2, 1.0, 2);
  const Constellation1D c(std::vector<double>{0.0});
  EXPECT_THROW(propagate_density(spec, c, QuadratureSpec{-10.0, 10.0, 64}), ConfigError);
  EXPECT_THROW(propagate_density(spec, c, QuadratureSpec{-0.5, 0.5, 4096}), ConfigError);
  EXPECT_THROW(propagate_density(spec, c, QuadratureSpec{-3.5, 3.5, 4096}), AccuracyError);
}

TEST(NoiseSqueezing, SuperstableBelowLinear) {
  const double beta = 3.0;
  const double x = kPi / beta;
  const double noise = 0.05;
  double prev = 1e300;
  for (int r : {1, 5, 10, 20}) {
    const auto spec = SineChannelSpec::equal_split(SineMap::from_q(1.0, beta), r, noise, 2);
    const Constellation1D c(std::vector<double>{x});
    const auto d = propagate_density(spec, c, default_density_grid(spec, c, 4096));
    const double ratio = variance_of(d, 0, x) / noise;
    EXPECT_LT(ratio, 1.0) << r;
    EXPECT_LT(ratio, prev) << r;
    prev = ratio;
  }
}

TEST(NoiseSqueezing, MonteCarloAgrees) {
  const double beta = 3.0;
  const double x = kPi / beta;
  const double noise = 0.05;
  const int r = 10;
  const auto y = oracle::sine_paths(1.0 / beta, beta, r, std::sqrt(noise / (r + 1)), x, 1'000'000, 12);
  double v = 0.0;
  for (double s : y) v += (s - x) * (s - x);
  v /= static_cast<double>(y.size());
  EXPECT_LT(v / noise, 1.0);
  const auto spec = SineChannelSpec::equal_split(SineMap::from_q(1.0, beta), r, noise, 2);
  const Constellation1D c(std::vector<double>{x});
  const auto d = propagate_density(spec, c, default_density_grid(spec, c, 4096));
  EXPECT_NEAR(variance_of(d, 0, x), v, 5.0 * v * std::sqrt(2.0 / 1e6) + 1e-6);
}

TEST(MonteCarlo, NoiselessAndLinear) {
  const auto map = SineMap::from_q(1.0, 3.0);
  const auto quiet = SineChannelSpec::equal_split(map, 4, 0.0, 2);
  double y = 0.3;
  for (int k = 0; k < 4; ++k) y = transfer(map, y);
  for (double s : monte_carlo_paths(quiet, 0.3, 100, 1)) EXPECT_EQ(s, y);

  const auto lin = SineChannelSpec::equal_split(SineMap{0.0, 3.0}, 9, 2.0, 2);
  const std::size_t n = 200'000;
  const auto samples = monte_carlo_paths(lin, 1.0, n, 2);
  double v = 0.0;
  for (double s : samples) v += (s - 1.0) * (s - 1.0);
  v /= n;
  EXPECT_NEAR(v, 2.0, 3.0 * 2.0 * std::sqrt(2.0 / n));
}

TEST(MonteCarlo, Reproducible) {
  const auto spec = SineChannelSpec::equal_split(SineMap::from_q(0.5, 3.0), 3, 1.0, 2);
  const auto a = monte_carlo_paths(spec, 1.0, 150'000, 77);
  EXPECT_EQ(a, monte_carlo_paths(spec, 1.0, 150'000, 77));
  EXPECT_NE(a, monte_carlo_paths(spec, 1.0, 150'000, 78));
  const auto head = monte_carlo_paths(spec, 1.0, 1000, 77);
  EXPECT_TRUE(std::equal(head.begin(), head.end(), a.begin()));
}

TEST(MonteCarlo, MatchesKernel) {
  const auto spec = SineChannelSpec::equal_split(SineMap::from_q(1.0, 3.0), 10, 1.0, 2);
  const double x = kPi / 3.0;
  const Constellation1D c(std::vector<double>{x});
  const auto d = propagate_density(spec, c, default_density_grid(spec, c, 2048));
  const auto samples = monte_carlo_paths(spec, x, 1'000'000, 3);
  EXPECT_LT(oracle::total_variation(d.axis, d.step, d.densities[0], samples, 16), 0.02);
}

TEST(PathAction, Identities) {
  const auto spec = SineChannelSpec::equal_split(SineMap::from_q(1.0, 3.0), 4, 1.0, 2);
  std::vector<double> path(5);
  path[0] = 0.7;
  for (int k = 1; k <= 4; ++k) path[k] = transfer(spec.map, path[k - 1]);
  EXPECT_EQ(path_action(spec, path, 0.7), 0.0);

  auto bumped = path;
  bumped[2] += 0.1;
  const double r3 = bumped[3] - transfer(spec.map, bumped[2]);
  EXPECT_NEAR(path_action(spec, bumped, 0.7), 0.01 + r3 * r3, 1e-15);

  std::mt19937_64 gen(13);
  std::normal_distribution<double> z(0.0, 0.5);
  const double v = spec.stage_variances[0];
  for (int t = 0; t < 50; ++t) {
    for (double& p : path) p = z(gen);
    double ref = 0.0;
    ref += std::log(gaussian_pdf(path[0], 0.2, v));
    for (int k = 1; k <= 4; ++k) ref += std::log(gaussian_pdf(path[k], transfer(spec.map, path[k - 1]), v));
    EXPECT_NEAR(path_log_density(spec, path, 0.2), ref, 1e-10);
    const double from_action = -path_action(spec, path, 0.2) / (2.0 * v) - 2.5 * std::log(2.0 * kPi * v);
    EXPECT_NEAR(from_action, ref, 1e-10);
  }
  EXPECT_THROW(path_action(spec, std::vector<double>(3), 0.0), DomainError);
}

// Moving each cell's mass to its image centre adds O(h^2) error per stage.
double linear_response_error(const LatticeOptions& opt) {
  const auto spec = SineChannelSpec::equal_split(SineMap::from_pitch(1e-12, 2.0), 3, 0.4, 2);
  const auto resp = propagate_lattice(spec, opt);
  const double x0 = resp.pitch / 2.0;
  double total = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < resp.mass.size(); ++i) {
    const double lo = x0 + (static_cast<double>(i) - resp.center - 0.5) * resp.cell_width;
    const double ref = oracle::normal_mass((lo - x0) / std::sqrt(0.4), (lo + resp.cell_width - x0) / std::sqrt(0.4));
    worst = std::max(worst, std::abs(resp.mass[i] - ref));
    total += resp.mass[i];
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
  return worst;
}

TEST(LatticeResponse, LinearCellMasses) {
  const double coarse = linear_response_error(LatticeOptions{});
  LatticeOptions fine;
  fine.cells_per_sigma = 32.0;
  EXPECT_LT(coarse, 5e-5);
  EXPECT_LT(linear_response_error(fine), coarse / 8.0);
}

TEST(LatticeResponse, BinnedInformationBelowContinuous) {
  const auto spec = SineChannelSpec::equal_split(SineMap::from_pitch(1.0, 2.0), 5, 1.0, 2);
  const auto resp = propagate_lattice(spec);
  const int m = 4;
  ShiftChannel ch(resp.mass, static_cast<std::size_t>(resp.cells_per_pitch), m);
  const auto u = uniform_distribution(m);
  const double binned = mutual_information(ch, std::span<const double>(u));
  const auto c = sine_alphabet(spec.map, m);
  const auto d = propagate_density(spec, c, default_density_grid(spec, c, 8192));
  const double cont = mi_continuous(u, d);
  EXPECT_LE(binned, cont + 1e-6);
  EXPECT_NEAR(binned, cont, 2e-3);
}

TEST(DensityCsv, Layout) {
  DensityGrid d;
  d.axis = {0.0, 0.5};
  d.step = 0.5;
  d.densities = {{1.0, 0.25}, {0.5, 2.0}};
  std::ostringstream os;
  write_density_csv(d, os);
  EXPECT_EQ(os.str(), "y,p0,p1\n0,1,0.5\n0.5,0.25,2\n");
}

}  // namespace
}  // namespace regen
