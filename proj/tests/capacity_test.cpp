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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "regen/capacity.hpp"
#include "regen/errors.hpp"
#include "regen/experiments.hpp"
#include "regen/ideal_regen.hpp"
#include "regen/sine_channel.hpp"

namespace regen {
namespace {

TransitionMatrix matrix(const oracle::Matrix& m) {
  Eigen::MatrixXd e(m.size(), m[0].size());
  for (std::size_t k = 0; k < m.size(); ++k)
    for (std::size_t l = 0; l < m[0].size(); ++l) e(k, l) = m[k][l];
  return TransitionMatrix(std::move(e));
}

oracle::Matrix bsc(double p) { return {{1 - p, p}, {p, 1 - p}}; }

TEST(MiDiscrete, Examples) {
  EXPECT_NEAR(mi_discrete(uniform_distribution(8), TransitionMatrix::identity(8)), 3.0, 1e-14);
  EXPECT_NEAR(mi_discrete(uniform_distribution(2), matrix(bsc(0.11))), 1.0 - oracle::binary_entropy(0.11), 1e-14);
  const oracle::Matrix same{{0.2, 0.2, 0.2}, {0.5, 0.5, 0.5}, {0.3, 0.3, 0.3}};
  EXPECT_NEAR(mi_discrete(std::vector<double>{0.2, 0.3, 0.5}, matrix(same)), 0.0, 1e-15);
  EXPECT_THROW(mi_discrete(uniform_distribution(3), TransitionMatrix::identity(2)), DomainError);
}

TEST(MiDiscrete, MatchesTripleSum) {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 20; ++t) {
    const auto w = oracle::random_channel(7, gen);
    const auto p = oracle::random_distribution(7, gen);
    const double mi = mi_discrete(p, matrix(w));
    EXPECT_NEAR(mi, oracle::mutual_information(p, w), 1e-13);
    EXPECT_GE(mi, 0.0);
    EXPECT_LE(mi, entropy_bits(p) + 1e-13);
  }
}

DensityGrid gaussian_grid(const std::vector<double>& pts, double variance, int g, double reach) {
  DensityGrid d;
  const double lo = pts.front() - reach, hi = pts.back() + reach;
  d.step = (hi - lo) / (g - 1);
  for (int i = 0; i < g; ++i) d.axis.push_back(lo + i * d.step);
  for (double x : pts) {
    std::vector<double> f;
    for (double y : d.axis) f.push_back(gaussian_pdf(y, x, variance));
    d.densities.push_back(std::move(f));
  }
  return d;
}

// Binary antipodal input in Gaussian noise, by Gauss-Legendre panels.
double bpsk_information(double a, double variance) {
  const double s = std::sqrt(variance);
  auto pdf = [&](long double y, long double m) {
    return std::exp(-(y - m) * (y - m) / (2 * variance)) / std::sqrt(2 * std::numbers::pi_v<long double> * variance);
  };
  auto integrand = [&](long double y) {
    const long double f = pdf(y, a), g = pdf(y, -a);
    const long double mix = 0.5L * (f + g);
    return f > 0 ? f * std::log2(f / mix) : 0.0L;
  };
  return static_cast<double>(oracle::integrate(integrand, a - 14 * s, a + 14 * s, 400));
}

TEST(MiContinuous, Examples) {
  DensityGrid twin = gaussian_grid({0.0, 1.0}, 1.0, 2001, 10.0);
  twin.densities[1] = twin.densities[0];
  EXPECT_NEAR(mi_continuous(uniform_distribution(2), twin), 0.0, 1e-12);
  EXPECT_NEAR(mi_continuous(uniform_distribution(2), gaussian_grid({-20.0, 20.0}, 1.0, 8001, 10.0)), 1.0, 1e-9);
  const double ref = bpsk_information(1.0, 1.0);
  EXPECT_NEAR(mi_continuous(uniform_distribution(2), gaussian_grid({-1.0, 1.0}, 1.0, 4001, 12.0)), ref, 1e-4);
  DensityGrid bad = gaussian_grid({-1.0, 1.0}, 1.0, 2001, 10.0);
  for (double& v : bad.densities[0]) v *= 1.1;
  EXPECT_THROW(mi_continuous(uniform_distribution(2), bad), DomainError);
}

TEST(MiContinuous, BinnedIsLower) {
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> var(0.1, 2.0);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 2 + t % 5;
    std::vector<double> pts(m);
    for (auto& x : pts) x = u(gen);
    std::sort(pts.begin(), pts.end());
    const double v = var(gen);
    const auto p = oracle::random_distribution(m, gen);
    const double binned = mi_discrete(p, segment_matrix(Constellation1D(pts), IdealChannelSpec{1, v, 2}));
    const double cont = mi_continuous(p, gaussian_grid(pts, v, 20001, 10.0 * std::sqrt(v)));
    EXPECT_LE(binned, cont + 1e-7) << t;
  }
}

TEST(BlahutArimoto, BinarySymmetric) {
  for (double p : {0.01, 0.11, 0.3}) {
    const auto r = blahut_arimoto(matrix(bsc(p)), BlahutArimotoOptions{1e-12});
    EXPECT_NEAR(r.capacity_bits, 1.0 - oracle::binary_entropy(p), 1e-9);
    EXPECT_NEAR(r.input.probabilities[0], 0.5, 1e-9);
    const std::vector<double> cost{1.0, 1.0};
    const auto rc = blahut_arimoto(matrix(bsc(p)), cost, 1.0, BlahutArimotoOptions{1e-12});
    EXPECT_NEAR(rc.capacity_bits, r.capacity_bits, 1e-12);
  }
}

TEST(BlahutArimoto, ZChannel) {
  const oracle::Matrix z{{1.0, 0.5}, {0.0, 0.5}};
  const auto r = blahut_arimoto(matrix(z), BlahutArimotoOptions{1e-12});
  EXPECT_NEAR(r.capacity_bits, std::log2(1.25), 1e-9);
  EXPECT_NEAR(r.capacity_bits, oracle::two_input_capacity(z, 1e-6), 1e-6);
  EXPECT_NEAR(r.input.probabilities[0], 0.6, 1e-6);
}

TEST(BlahutArimoto, Identity) {
  const auto r = blahut_arimoto(TransitionMatrix::identity(4), std::vector<double>(4, 2.0), 2.0);
  EXPECT_NEAR(r.capacity_bits, 2.0, 1e-7);
  for (double p : r.input.probabilities) EXPECT_NEAR(p, 0.25, 1e-6);
}

TEST(BlahutArimoto, PowerConstrainedMatchesScan) {
  // Two inputs with costs 0 and 4, budget 1: P(input 1) <= 1/4.
  const oracle::Matrix w{{0.9, 0.2}, {0.1, 0.8}};
  const auto r = blahut_arimoto(matrix(w), std::vector<double>{0.0, 4.0}, 1.0, BlahutArimotoOptions{1e-10});
  double best = 0.0;
  for (int i = 0; i <= 250000; ++i) {
    const double b = 0.25 * i / 250000;
    best = std::max(best, oracle::mutual_information({1 - b, b}, w));
  }
  EXPECT_NEAR(r.capacity_bits, best, 1e-9);
  EXPECT_LE(r.input.mean_power, 1.0 + 1e-9);
  EXPECT_GT(r.multiplier, 0.0);
}

TEST(BlahutArimoto, Invariants) {
  const IdealChannelSpec spec{6, 1.0, 2};
  const auto c = make_rectangular(12, 0.7);
  const auto w = chain_matrix(segment_matrix(c, spec), spec.R);
  std::vector<double> cost;
  for (double x : c.points()) cost.push_back(x * x);
  const double budget = 1.5;
  const auto r = blahut_arimoto(w, cost, budget);
  const auto& p = r.input.probabilities;
  EXPECT_LE(r.input.mean_power, budget * (1.0 + 1e-9));
  EXPECT_LE(r.capacity_bits, std::log2(12.0));
  EXPECT_LE(r.capacity_bits, entropy_bits(p) + 1e-9);
  EXPECT_LE(r.max_decrease, 1e-12);
  EXPECT_LT(r.gap_bits, 1e-7);
  EXPECT_NEAR(mi_discrete(p, w), r.capacity_bits, 1e-12);
  for (std::size_t l = 0; l < 6; ++l) EXPECT_NEAR(p[l], p[11 - l], 1e-8);
}

TEST(BlahutArimoto, ChannelFormsAgree) {
  const IdealChannelSpec spec{4, 1.0, 2};
  const auto c = make_rectangular(20, 0.6);
  const auto w = chain_matrix(segment_matrix(c, spec), spec.R);
  std::vector<double> cost;
  for (double x : c.points()) cost.push_back(x * x);
  const auto dense = blahut_arimoto(DenseChannel(w), cost, 2.0);
  const auto sparse = blahut_arimoto(SparseChannel(chain_sparse(segment_matrix(c, spec), spec.R)), cost, 2.0);
  EXPECT_NEAR(dense.capacity_bits, sparse.capacity_bits, 2e-7);

  std::vector<double> kernel{0.1, 0.2, 0.4, 0.2, 0.1};
  ShiftChannel shift(kernel, 2, 6);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(shift.outputs()), 6);
  for (Eigen::Index l = 0; l < 6; ++l)
    for (Eigen::Index j = 0; j < 5; ++j) full(2 * l + j, l) = kernel[static_cast<std::size_t>(j)];
  const std::vector<double> c6{6.25, 2.25, 0.25, 0.25, 2.25, 6.25};
  EXPECT_NEAR(blahut_arimoto(shift, c6, 1.0).capacity_bits,
              blahut_arimoto(DenseChannel(full), c6, 1.0).capacity_bits, 2e-7);
}

TEST(BlahutArimoto, Rejects) {
  const auto w = matrix(bsc(0.1));
  EXPECT_THROW(blahut_arimoto(w, std::vector<double>{2.0, 3.0}, 1.0), DomainError);
  EXPECT_THROW(blahut_arimoto(w, std::vector<double>{1.0}, 1.0), DomainError);
  EXPECT_THROW(blahut_arimoto(w, std::vector<double>{1.0, 1.0}, 0.0), DomainError);
  const IdealChannelSpec spec{20, 1.0, 2};
  const auto c = make_rectangular(64, 0.3);
  std::vector<double> cost;
  for (double x : c.points()) cost.push_back(x * x);
  BlahutArimotoOptions capped{1e-12, 3};
  EXPECT_THROW(blahut_arimoto(chain_matrix(segment_matrix(c, spec), 20), cost, 1.0, capped), ConvergenceError);
}

TEST(CapacityPoint, UndefinedGain) {
  EXPECT_FALSE(make_capacity_point(1e-7, 0.0).gain.has_value());
  const auto p = make_capacity_point(1.0, 2.0);
  EXPECT_DOUBLE_EQ(p.linear_capacity_bits, 1.0);
  EXPECT_DOUBLE_EQ(*p.gain, 2.0);
}

TEST(CapacitySweep, NearlyLinearChannelMatchesShannon) {
  const IdealChannelSpec line{1, 1.0, 2};
  const std::vector<double> rhos{3.0, 10.0, 30.0};
  auto cap = [&](double rho) { return sine_lattice_capacity(rho, 1e-9, line, 0.25).capacity_bits; };
  const auto s = capacity_sweep(cap, rhos, 2);
  EXPECT_TRUE(s.monotonicity_violations.empty());
  for (const auto& p : s.points) {
    EXPECT_NEAR(*p.gain, 1.0, 0.05) << p.snr;
    EXPECT_LE(*p.gain, 1.0 + 1e-6) << p.snr;
  }
}

TEST(CapacitySweep, BinaryChainBeatsLinearAtOptimum) {
  const IdealChannelSpec spec{20, 1.0, 2};
  const double so = optimal_cell(spec).snr_opt;
  auto cap = [&](double rho) {
    const auto c = make_rectangular(2, 2.0 * std::sqrt(rho * spec.N));
    return spec.n * mi_discrete(uniform_distribution(2), chain_matrix(segment_matrix(c, spec), spec.R));
  };
  const std::vector<double> rhos{so};
  EXPECT_GT(*capacity_sweep(cap, rhos).points[0].gain, 1.0);
}

TEST(CapacitySweep, ConstantHighSnrGap) {
  const IdealChannelSpec spec{20, 1.0, 2};
  const double d = optimal_cell(spec).d_opt;
  const std::vector<double> rhos{1e3, 1e3 * std::sqrt(10.0), 1e4};
  auto cap = [&](double rho) { return ideal_lattice_capacity(rho, spec, d, 0, BlahutArimotoOptions{1e-6}).capacity_bits; };
  const auto s = capacity_sweep(cap, rhos);
  double lo = 1e300, hi = -1e300;
  for (const auto& p : s.points) {
    lo = std::min(lo, p.capacity_bits - p.linear_capacity_bits);
    hi = std::max(hi, p.capacity_bits - p.linear_capacity_bits);
  }
  EXPECT_LT(hi - lo, 0.2);
}

TEST(CapacitySweep, ReportsDecrease) {
  const std::vector<double> rhos{1.0, 2.0, 3.0};
  const auto s = capacity_sweep([](double r) { return r == 2.0 ? 0.1 : r; }, rhos);
  ASSERT_EQ(s.monotonicity_violations.size(), 1u);
  EXPECT_EQ(s.monotonicity_violations[0], 1u);
  const std::vector<double> bad{2.0, 1.0};
  EXPECT_THROW(capacity_sweep([](double r) { return r; }, bad), DomainError);
}

TEST(OptimizeScalar, Quadratic) {
  const double peak = 1.2345;
  const auto r = optimize_scalar([&](double x) { return -(x - peak) * (x - peak); }, -3.0, 5.0, 1e-6);
  EXPECT_NEAR(r.best_parameter, peak, 1e-6);
  EXPECT_FALSE(r.flat);
  double best = -1e300;
  for (const auto& [x, v] : r.trace) best = std::max(best, v);
  EXPECT_EQ(best, r.best_capacity);
  const auto lg = optimize_scalar([&](double x) { return -std::pow(std::log(x / peak), 2); }, 0.1, 10.0, 1e-7,
                                  ScalarSearchOptions{16, true});
  EXPECT_NEAR(lg.best_parameter, peak, 1e-6);
}

TEST(OptimizeScalar, ConstantKeepsLowEnd) {
  const auto r = optimize_scalar([](double) { return 3.0; }, 1.0, 2.0, 1e-6);
  EXPECT_TRUE(r.flat);
  EXPECT_EQ(r.best_parameter, 1.0);
  EXPECT_EQ(r.trace.size(), 32u);
}

TEST(OptimizeScalar, ErrorsCarryParameter) {
  auto f = [](double x) -> double {
    if (x > 0.5) throw ConvergenceError("boom");
    return x;
  };
  try {
    optimize_scalar(f, 0.0, 1.0, 1e-6);
    FAIL() << "expected an exception";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("parameter"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
  EXPECT_THROW(optimize_scalar(f, 1.0, 1.0, 1e-6), DomainError);
}

TEST(OptimizeScalar, SinePitchAgreesWithExhaustiveScan) {
  const IdealChannelSpec line{10, 1.0, 2};
  const double rho = 10.0;
  const auto opt = sine_optimized_capacity(rho, 1.0, line);
  const auto [lo, hi] = spacing_bracket(rho, line);
  double best = -1.0, best_pitch = 0.0;
  for (int i = 0; i < 512; ++i) {
    const double pitch = lo * std::pow(hi / lo, i / 511.0);
    const double c = sine_lattice_capacity(rho, 1.0, line, pitch).capacity_bits;
    if (c > best) {
      best = c;
      best_pitch = pitch;
    }
  }
  EXPECT_GE(opt.capacity_bits, best - 1e-5);
  EXPECT_NEAR(opt.spacing, best_pitch, 0.02 * best_pitch);
  const double d_opt = optimal_cell(line).d_opt;
  EXPECT_GT(opt.spacing, 0.5 * d_opt);
  EXPECT_LT(opt.spacing, 2.0 * d_opt);
}

}  // namespace
}  // namespace regen
