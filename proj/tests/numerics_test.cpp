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
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "regen/errors.hpp"
#include "regen/numerics.hpp"

namespace regen {
namespace {

TEST(Erf, KnownValues) {
  EXPECT_EQ(erf(0.0), 0.0);
  EXPECT_NEAR(erf(10.0), 1.0, 1e-15);
  EXPECT_NEAR(erf(1.0), 0.842700792949715, 1e-15);
  EXPECT_NEAR(oracle::erf(1.0), 0.842700792949715, 1e-15);
}

TEST(Erf, IsOdd) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(gen);
    EXPECT_NEAR(erf(-x), -erf(x), 1e-15);
  }
}

TEST(Erf, MatchesQuadrature) {
  for (double x = -6.0; x <= 6.0; x += 0.37) EXPECT_NEAR(erf(x), oracle::erf(x), 1e-13) << x;
}

TEST(NormalInterval, MatchesQuadrature) {
  const double cases[][2] = {{-1.0, 1.0}, {0.5, 3.0}, {-9.0, -7.5}, {6.0, 9.0}, {-2.0, 0.0}};
  for (const auto& c : cases) {
    const double ref = oracle::normal_mass(c[0], c[1]);
    EXPECT_NEAR(normal_interval(c[0], c[1]), ref, 1e-14 + 1e-12 * ref);
  }
  EXPECT_EQ(normal_interval(1.0, 1.0), 0.0);
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
}

TEST(LambertW, KnownValues) {
  EXPECT_EQ(lambert_w(0.0), 0.0);
  EXPECT_NEAR(lambert_w(std::numbers::e), 1.0, 1e-15);
  EXPECT_NEAR(lambert_w(1.0), 0.567143290409784, 1e-15);
  EXPECT_NEAR(lambert_w(1.0), oracle::lambert_w(1.0), 1e-15);
}

TEST(LambertW, RejectsNegative) {
  EXPECT_THROW(lambert_w(-0.1), DomainError);
  EXPECT_THROW(lambert_w(std::nan("")), DomainError);
}

TEST(LambertW, ResidualAndMonotone) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(std::log(1e-6), std::log(1e6));
  std::vector<double> xs(2000);
  for (auto& x : xs) x = std::exp(u(gen));
  std::sort(xs.begin(), xs.end());
  double prev = -1.0;
  for (double x : xs) {
    const double w = lambert_w(x);
    EXPECT_LE(std::abs(w * std::exp(w) - x), 1e-12 * std::max(1.0, x));
    EXPECT_NEAR(w, oracle::lambert_w(x), 1e-13 * std::max(1.0, w));
    EXPECT_GT(w, prev);
    prev = w;
  }
}

TEST(GaussianPdf, Peaks) {
  EXPECT_NEAR(gaussian_pdf(0.0, 0.0, 0.5), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(gaussian_pdf(3.0, 3.0, 2.0), 1.0 / std::sqrt(2.0 * std::numbers::pi * 2.0), 1e-15);
  EXPECT_THROW(gaussian_pdf(0.0, 0.0, 0.0), DomainError);
}

TEST(GaussianPdf, IntegratesToOne) {
  for (double v : {0.01, 0.5, 3.0}) {
    const double s = std::sqrt(v);
    const double total = integrate([&](double y) { return gaussian_pdf(y, 0.2, v); },
                                   QuadratureSpec{0.2 - 8 * s, 0.2 + 8 * s, 4096});
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(Quadrature, RulesAgree) {
  auto f = [](double x) { return std::cos(x) * std::exp(-x * x / 3.0); };
  const double ref = static_cast<double>(oracle::integrate(
      [](long double x) { return std::cos(x) * std::exp(-x * x / 3); }, -2.0L, 3.0L, 40));
  EXPECT_NEAR(integrate(f, QuadratureSpec{-2.0, 3.0, 64, QuadratureRule::kGaussLegendre}), ref, 1e-14);
  EXPECT_NEAR(integrate(f, QuadratureSpec{-2.0, 3.0, 20001}), ref, 1e-8);
  EXPECT_NEAR(integrate_adaptive(f, -2.0, 3.0, 1e-13), ref, 1e-12);
}

TEST(Quadrature, RejectsBadSpec) {
  auto f = [](double) { return 1.0; };
  EXPECT_THROW(integrate(f, QuadratureSpec{1.0, 0.0, 64}), ConfigError);
  EXPECT_THROW(integrate(f, QuadratureSpec{0.0, 1.0, 8}), ConfigError);
}

TEST(Entropy, KnownValues) {
  EXPECT_EQ(entropy_bits(std::vector<double>{1.0, 0.0, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(entropy_bits(std::vector<double>(16, 1.0 / 16)), 4.0, 1e-14);
  EXPECT_NEAR(entropy_bits(std::vector<double>{0.9, 0.1}), 0.468995593, 1e-9);
  EXPECT_NEAR(binary_entropy(0.11), oracle::binary_entropy(0.11), 1e-15);
  EXPECT_THROW(entropy_bits(std::vector<double>{0.5, 0.4}), DomainError);
}

}  // namespace
}  // namespace regen
