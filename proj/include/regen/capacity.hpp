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

// Mutual information and its maximisation over the input distribution.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "regen/errors.hpp"
#include "regen/format.hpp"
#include "regen/numerics.hpp"
#include "regen/sine_channel.hpp"
#include "regen/transition_matrix.hpp"

namespace regen {

struct InputDistribution {
  std::vector<double> probabilities;
  double mean_power = 0.0;
};

struct CapacityPoint {
  double snr = 0.0;  // linear scale
  double capacity_bits = 0.0;
  double linear_capacity_bits = 0.0;
  std::optional<double> gain;  // undefined when the linear capacity is < 1e-6
};

/// Linear AWGN reference (n/2) log2(1 + rho); equals log2(1 + rho) for a
/// two-quadrature signal.
inline double linear_capacity(double rho, int n = 2) {
  return 0.5 * n * std::log2(1.0 + rho);
}

inline CapacityPoint make_capacity_point(double rho, double capacity, int n = 2) {
  CapacityPoint p;
  p.snr = rho;
  p.capacity_bits = capacity;
  p.linear_capacity_bits = linear_capacity(rho, n);
  if (p.linear_capacity_bits >= 1e-6) p.gain = capacity / p.linear_capacity_bits;
  return p;
}

// ---------------------------------------------------------------------------
// Channel views used by the Blahut-Arimoto iteration. A channel provides
//   inputs(), outputs(),
//   output_distribution(p, q):  q = W p
//   divergences(q, d):          d_l = sum_k W_kl ln(W_kl / q_k)   (nats)

/// Dense K x M channel matrix.
class DenseChannel {
 public:
  explicit DenseChannel(const TransitionMatrix& w) : w_(w.matrix()) { init(); }
  explicit DenseChannel(Eigen::MatrixXd w) : w_(TransitionMatrix(std::move(w)).matrix()) {
    init();
  }

  std::size_t inputs() const { return static_cast<std::size_t>(w_.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(w_.rows()); }

  void output_distribution(std::span<const double> p, std::span<double> q) const {
    Eigen::Map<const Eigen::VectorXd> pv(p.data(), static_cast<Eigen::Index>(p.size()));
    Eigen::Map<Eigen::VectorXd> qv(q.data(), static_cast<Eigen::Index>(q.size()));
    qv.noalias() = w_ * pv;
  }

  void divergences(std::span<const double> q, std::span<double> d) const {
    logq_.resize(static_cast<Eigen::Index>(q.size()));
    for (std::size_t k = 0; k < q.size(); ++k) {
      logq_[static_cast<Eigen::Index>(k)] = std::log(std::max(q[k], 1e-300));
    }
    Eigen::Map<Eigen::VectorXd> dv(d.data(), static_cast<Eigen::Index>(d.size()));
    dv.noalias() = -w_.transpose() * logq_;
    dv -= neg_entropy_;
  }

  /// W_A^T diag(1/q) W_A over the listed inputs; minus the Hessian of I in nats.
  Eigen::MatrixXd curvature(std::span<const double> q, const std::vector<std::size_t>& active) const {
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd wa(w_.rows(), k);
    for (Eigen::Index a = 0; a < k; ++a) wa.col(a) = w_.col(static_cast<Eigen::Index>(active[a]));
    for (Eigen::Index r = 0; r < wa.rows(); ++r) {
      wa.row(r) /= std::sqrt(std::max(q[static_cast<std::size_t>(r)], 1e-300));
    }
    return wa.transpose() * wa;
  }

 private:
  void init() {
    neg_entropy_.resize(w_.cols());
    for (Eigen::Index l = 0; l < w_.cols(); ++l) {
      double h = 0.0;
      for (Eigen::Index k = 0; k < w_.rows(); ++k) {
        const double v = w_(k, l);
        if (v > 0.0) h -= v * std::log(v);
      }
      neg_entropy_[l] = h;
    }
  }

  Eigen::MatrixXd w_;
  Eigen::VectorXd neg_entropy_;  // H(Y | x_l) in nats
  mutable Eigen::VectorXd logq_;
};

/// Column-stochastic channel held in sparse form.
class SparseChannel {
 public:
  explicit SparseChannel(SparseKernel w) : w_(std::move(w)) {
    w_.makeCompressed();
    neg_entropy_ = Eigen::VectorXd::Zero(w_.cols());
    for (Eigen::Index l = 0; l < w_.outerSize(); ++l) {
      double h = 0.0;
      for (SparseKernel::InnerIterator it(w_, l); it; ++it) {
        if (it.value() < 0.0) throw DomainError("sparse channel: negative entry");
        if (it.value() > 0.0) h -= it.value() * std::log(it.value());
      }
      neg_entropy_[l] = h;
    }
  }

  std::size_t inputs() const { return static_cast<std::size_t>(w_.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(w_.rows()); }

  void output_distribution(std::span<const double> p, std::span<double> q) const {
    Eigen::Map<const Eigen::VectorXd> pv(p.data(), static_cast<Eigen::Index>(p.size()));
    Eigen::Map<Eigen::VectorXd> qv(q.data(), static_cast<Eigen::Index>(q.size()));
    qv.noalias() = w_ * pv;
  }

  void divergences(std::span<const double> q, std::span<double> d) const {
    logq_.resize(static_cast<Eigen::Index>(q.size()));
    for (std::size_t k = 0; k < q.size(); ++k) {
      logq_[static_cast<Eigen::Index>(k)] = std::log(std::max(q[k], 1e-300));
    }
    Eigen::Map<Eigen::VectorXd> dv(d.data(), static_cast<Eigen::Index>(d.size()));
    dv.noalias() = -(w_.transpose() * logq_);
    dv -= neg_entropy_;
  }

  Eigen::MatrixXd curvature(std::span<const double> q, const std::vector<std::size_t>& active) const {
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd wa = Eigen::MatrixXd::Zero(w_.rows(), k);
    for (Eigen::Index a = 0; a < k; ++a) {
      const auto col = static_cast<Eigen::Index>(active[static_cast<std::size_t>(a)]);
      for (SparseKernel::InnerIterator it(w_, col); it; ++it) {
        wa(it.row(), a) = it.value() / std::sqrt(std::max(q[static_cast<std::size_t>(it.row())], 1e-300));
      }
    }
    return wa.transpose() * wa;
  }

 private:
  SparseKernel w_;
  Eigen::VectorXd neg_entropy_;
  mutable Eigen::VectorXd logq_;
};

/// Translation-invariant channel: input l produces the kernel shifted by
/// l * stride output cells.
class ShiftChannel {
 public:
  ShiftChannel(std::vector<double> kernel, std::size_t stride, std::size_t inputs)
      : kernel_(std::move(kernel)), stride_(stride), inputs_(inputs) {
    if (kernel_.empty() || stride_ == 0 || inputs_ == 0) {
      throw DomainError("shift channel: empty kernel, stride or alphabet");
    }
    double s = 0.0;
    for (double v : kernel_) {
      if (!(v >= 0.0)) throw DomainError("shift channel: negative kernel entry");
      s += v;
    }
    for (double& v : kernel_) v /= s;
    first_ = 0;
    while (first_ < kernel_.size() && kernel_[first_] == 0.0) ++first_;
    last_ = kernel_.size();
    while (last_ > first_ && kernel_[last_ - 1] == 0.0) --last_;
    entropy_ = 0.0;
    for (double v : kernel_) {
      if (v > 0.0) entropy_ -= v * std::log(v);
    }
  }

  std::size_t inputs() const { return inputs_; }
  std::size_t outputs() const { return (inputs_ - 1) * stride_ + kernel_.size(); }
  const std::vector<double>& kernel() const { return kernel_; }
  std::size_t stride() const { return stride_; }

  void output_distribution(std::span<const double> p, std::span<double> q) const {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t l = 0; l < inputs_; ++l) {
      const double pl = p[l];
      if (pl == 0.0) continue;
      double* dst = q.data() + l * stride_;
      for (std::size_t j = first_; j < last_; ++j) dst[j] += pl * kernel_[j];
    }
  }

  void divergences(std::span<const double> q, std::span<double> d) const {
    logq_.resize(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) logq_[k] = std::log(std::max(q[k], 1e-300));
    for (std::size_t l = 0; l < inputs_; ++l) {
      const double* lq = logq_.data() + l * stride_;
      double s = 0.0;
      for (std::size_t j = first_; j < last_; ++j) s += kernel_[j] * lq[j];
      d[l] = -entropy_ - s;
    }
  }

  /// W_A^T diag(1/q) W_A over the listed inputs, using the band structure.
  Eigen::MatrixXd curvature(std::span<const double> q, const std::vector<std::size_t>& active) const {
    const std::size_t k = active.size();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(k));
    const std::size_t width = last_ - first_;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a; b < k; ++b) {
        const std::size_t shift = (active[b] - active[a]) * stride_;
        if (shift >= width) break;
        const double* qb = q.data() + active[b] * stride_;
        double v = 0.0;
        for (std::size_t j = first_; j + shift < last_; ++j) {
          v += kernel_[j] * kernel_[j + shift] / std::max(qb[j], 1e-300);
        }
        c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
        c(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
      }
    }
    return c;
  }

 private:
  std::vector<double> kernel_;
  std::size_t stride_;
  std::size_t inputs_;
  std::size_t first_ = 0, last_ = 0;
  double entropy_ = 0.0;
  mutable std::vector<double> logq_;
};

/// I(p; W) in bits for any channel view.
template <class Channel>
double mutual_information(const Channel& w, std::span<const double> p) {
  if (p.size() != w.inputs()) throw DomainError("mutual information: dimension mismatch");
  std::vector<double> q(w.outputs()), d(w.inputs());
  w.output_distribution(p, q);
  w.divergences(q, d);
  double s = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (p[l] > 0.0) s += p[l] * d[l];
  }
  return std::max(0.0, s * kLog2e);
}

namespace detail {

inline void check_distribution(std::span<const double> p, const char* who) {
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw DomainError(std::string(who) + ": negative probability");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) {
    throw DomainError(std::string(who) + ": probabilities do not sum to 1");
  }
}

}  // namespace detail

/// I(X; Y) in bits for a discrete input and discrete output channel.
inline double mi_discrete(std::span<const double> p, const TransitionMatrix& w) {
  if (static_cast<Eigen::Index>(p.size()) != w.inputs()) {
    throw DomainError("mi_discrete: dimension mismatch");
  }
  detail::check_distribution(p, "mi_discrete");
  const auto& m = w.matrix();
  Eigen::VectorXd q = Eigen::VectorXd::Zero(m.rows());
  for (Eigen::Index l = 0; l < m.cols(); ++l) q += p[static_cast<std::size_t>(l)] * m.col(l);
  double s = 0.0;
  for (Eigen::Index l = 0; l < m.cols(); ++l) {
    const double pl = p[static_cast<std::size_t>(l)];
    if (pl == 0.0) continue;
    double inner = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      const double v = m(k, l);
      if (v > 0.0) inner += v * std::log2(v / q[k]);
    }
    s += pl * inner;
  }
  return std::max(0.0, s);
}

inline double mi_discrete(const InputDistribution& p, const TransitionMatrix& w) {
  return mi_discrete(p.probabilities, w);
}

/// I(X; Y) in bits for a discrete input and continuous output given on a
/// density grid, by the trapezoid rule.
inline double mi_continuous(std::span<const double> p, const DensityGrid& d) {
  if (p.size() != d.densities.size()) throw DomainError("mi_continuous: dimension mismatch");
  detail::check_distribution(p, "mi_continuous");
  for (std::size_t l = 0; l < d.densities.size(); ++l) {
    if (std::abs(d.integral(l) - 1.0) > 1e-6) {
      throw DomainError("mi_continuous: density " + std::to_string(l) + " is not normalized");
    }
  }
  const std::size_t g = d.axis.size();
  double s = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    const double w = (i == 0 || i + 1 == g) ? 0.5 * d.step : d.step;
    double mix = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) mix += p[l] * d.densities[l][i];
    if (mix <= 0.0) continue;
    for (std::size_t l = 0; l < p.size(); ++l) {
      const double f = d.densities[l][i];
      if (p[l] > 0.0 && f > 0.0) s += w * p[l] * f * std::log2(f / mix);
    }
  }
  return std::max(0.0, s);
}

// ---------------------------------------------------------------------------
// Blahut-Arimoto with a quadratic power cost.

struct BlahutArimotoOptions {
  double tol = 1e-7;              // capacity bracket, bits
  long max_iterations = 100000;   // per inner solve
};

struct BlahutArimotoResult {
  InputDistribution input;
  double capacity_bits = 0.0;
  double multiplier = 0.0;    // power multiplier s (nats per unit power)
  long iterations = 0;        // summed over all inner solves
  double gap_bits = 0.0;      // final capacity bracket
  double max_decrease = 0.0;  // largest drop of the tilted objective seen
};

namespace detail {

// Alternating maximisation of I(p) over distributions with
// sum_l p_l c_l <= budget. For the current p the update is
//   p'_l ~ p_l exp(step * (D_l - s c_l)),
// with s >= 0 chosen so that p' meets the power constraint (s = 0 when the
// untilted update already does). With step = 1 this is the Blahut-Arimoto
// step, which never decreases I; longer steps are tried first and kept only
// when they do not decrease I either.
//
// For any s >= 0, C(budget) <= max_l (D_l - s c_l) + s * budget, which with
// I(p) for a feasible p brackets the capacity.
template <class Channel>
class ConstrainedSolver {
 public:
  ConstrainedSolver(const Channel& w, std::span<const double> costs, double budget,
                    const BlahutArimotoOptions& opt)
      : w_(w), costs_(costs), budget_(budget), opt_(opt),
        q_(w.outputs()), d_(w.inputs()) {}

  BlahutArimotoResult run() {
    const std::size_t m = w_.inputs();
    std::vector<double> p(m, 1.0 / static_cast<double>(m));
    std::vector<double> cand(m), d_cur(m);
    double mi = evaluate(p);
    double step = 1.0;
    double s = 0.0;
    double gap = std::numeric_limits<double>::infinity();
    bool feasible = power(p) <= budget_ * (1.0 + 1e-12);
    const double tol = opt_.tol * kLn2;
    long it = 0;
    for (; it < opt_.max_iterations; ++it) {
      s = tilt_for_budget(p, step, cand);
      if (feasible) {
        gap = dual_bound(s) - mi;
        if (gap < tol) break;
      }
      d_cur = d_;
      double next = evaluate(cand);
      if (step > 1.0 && feasible && next < mi) {
        d_ = d_cur;
        step = 1.0;
        s = tilt_for_budget(p, step, cand);
        next = evaluate(cand);
      } else {
        step = std::min(2.0 * step, 64.0);
      }
      if (feasible && mi - next > max_decrease_) max_decrease_ = mi - next;
      p.swap(cand);
      mi = next;
      feasible = true;
      if (it % kNewtonEvery == kNewtonEvery - 1) newton_step(p, mi, s);
    }
    if (it == opt_.max_iterations) {
      throw ConvergenceError("blahut_arimoto: no convergence after " +
                             std::to_string(opt_.max_iterations) + " iterations (bracket " +
                             format_number(gap * kLog2e) + " bits, multiplier " +
                             format_number(s) + ")");
    }
    BlahutArimotoResult r;
    r.input.mean_power = power(p);
    r.input.probabilities = std::move(p);
    r.capacity_bits = std::max(0.0, mi * kLog2e);
    r.multiplier = s;
    r.iterations = it + 1;
    r.gap_bits = gap * kLog2e;
    r.max_decrease = max_decrease_ * kLog2e;
    return r;
  }

 private:
  double cost(std::size_t l) const { return costs_.empty() ? 0.0 : costs_[l]; }
  double constrained_budget() const { return costs_.empty() ? 0.0 : budget_; }

  static constexpr long kNewtonEvery = 16;
  static constexpr std::size_t kNewtonMaxSupport = 256;
  static constexpr double kNewtonMinStep = 1e-3;

  // Projected Newton step on the face of the simplex spanned by the current
  // support, holding the power fixed when the multiplier is positive. Accepted
  // only when I does not decrease.
  void newton_step(std::vector<double>& p, double& mi, double s) {
    std::vector<std::size_t> active;
    for (std::size_t l = 0; l < p.size(); ++l) {
      if (p[l] > 0.0) active.push_back(l);
    }
    if (active.size() > kNewtonMaxSupport) return;
    const bool fix_power = !costs_.empty() && s > 0.0;
    const std::size_t nc = fix_power ? 2 : 1;
    Eigen::VectorXd dir;
    double t = 1.0;
    // Symbols that would block a reasonable step are frozen and the system
    // is solved again on the remaining support.
    for (;;) {
      if (active.size() <= nc) return;
      const auto k = static_cast<Eigen::Index>(active.size());
      const auto n = static_cast<Eigen::Index>(active.size() + nc);
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n, n);
      kkt.topLeftCorner(k, k) = w_.curvature(q_, active);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < k; ++i) {
        const std::size_t l = active[static_cast<std::size_t>(i)];
        rhs[i] = d_[l];
        kkt(i, k) = kkt(k, i) = 1.0;
        if (fix_power) kkt(i, k + 1) = kkt(k + 1, i) = cost(l);
      }
      dir = kkt.completeOrthogonalDecomposition().solve(rhs).head(k);
      if (!dir.allFinite() || rhs.head(k).dot(dir) <= 0.0) return;
      std::vector<std::size_t> kept;
      t = 1.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const std::size_t l = active[static_cast<std::size_t>(i)];
        const double reach = dir[i] < 0.0 ? -p[l] / dir[i] : 1.0;
        if (reach < kNewtonMinStep) continue;
        kept.push_back(l);
        t = std::min(t, (1.0 - 1e-6) * reach);
      }
      if (kept.size() == active.size()) break;
      active.swap(kept);
    }
    const auto k = static_cast<Eigen::Index>(active.size());
    std::vector<double> trial(p.size());
    for (int tries = 0; tries < 30; ++tries, t *= 0.5) {
      trial = p;
      double z = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const std::size_t l = active[static_cast<std::size_t>(i)];
        trial[l] = std::max(p[l] + t * dir[i], 0.0);
      }
      for (double v : trial) z += v;
      for (double& v : trial) v /= z;
      if (!costs_.empty() && power(trial) > budget_ * (1.0 + 1e-12)) continue;
      const double next = evaluate(trial);
      if (next >= mi) {
        p.swap(trial);
        mi = next;
        return;
      }
    }
    mi = evaluate(p);
  }

  double bound_at(double s) const {
    double amax = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < d_.size(); ++l) amax = std::max(amax, d_[l] - s * cost(l));
    return amax + s * constrained_budget();
  }

  // min over s >= 0 of the dual bound; convex in s, so a golden search around
  // the multiplier of the current update suffices.
  double dual_bound(double s0) const {
    if (costs_.empty()) return bound_at(0.0);
    double a = 0.0, b = std::max(2.0 * s0, 1e-12);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = bound_at(x1), f2 = bound_at(x2);
    for (int i = 0; i < 60; ++i) {
      if (f1 <= f2) {
        b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = bound_at(x1);
      } else {
        a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = bound_at(x2);
      }
    }
    return std::min({bound_at(s0), f1, f2, bound_at(0.0)});
  }

  double power(const std::vector<double>& p) const {
    double s = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) s += p[l] * cost(l);
    return s;
  }

  // Fills q_ and d_ for p and returns I(p) in nats.
  double evaluate(const std::vector<double>& p) {
    w_.output_distribution(p, q_);
    w_.divergences(q_, d_);
    double mi = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) {
      if (p[l] > 0.0) mi += p[l] * d_[l];
    }
    return mi;
  }

  // out ~ p exp(step (d - s c)); returns the power of out and stores the
  // variance of the cost under out in var.
  double tilt(const std::vector<double>& p, double step, double s,
              std::vector<double>& out, double& var) const {
    double amax = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < p.size(); ++l) {
      if (p[l] > 0.0) amax = std::max(amax, d_[l] - s * cost(l));
    }
    double z = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) {
      out[l] = p[l] > 0.0 ? p[l] * std::exp(step * (d_[l] - s * cost(l) - amax)) : 0.0;
      z += out[l];
    }
    double pw = 0.0;
    double sq = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) {
      out[l] /= z;
      pw += out[l] * cost(l);
      sq += out[l] * cost(l) * cost(l);
    }
    var = std::max(0.0, sq - pw * pw);
    return pw;
  }

  // Smallest s >= 0 whose tilted update meets the budget: safeguarded Newton
  // on the (decreasing) power of the update, started from the last multiplier.
  double tilt_for_budget(const std::vector<double>& p, double step,
                         std::vector<double>& out) {
    double var = 0.0;
    if (costs_.empty() || tilt(p, step, 0.0, out, var) <= budget_) return 0.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double x = last_s_ > 0.0 ? last_s_ : 1.0 / budget_;
    for (int i = 0; i < 200; ++i) {
      const double g = tilt(p, step, x, out, var) - budget_;
      if (g <= 0.0) {
        hi = x;
        if (-g <= 1e-13 * budget_) break;
      } else {
        lo = x;
      }
      if (std::isfinite(hi) && hi - lo <= 1e-15 * hi) break;
      double next = var > 0.0 ? x + g / (step * var) : x;
      if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 4.0 * x;
      x = next;
      if (x > 1e300) throw ConvergenceError("blahut_arimoto: multiplier bracket failed");
    }
    if (x != hi) tilt(p, step, hi, out, var);
    last_s_ = hi;
    return hi;
  }

  const Channel& w_;
  std::span<const double> costs_;
  double budget_;
  BlahutArimotoOptions opt_;
  std::vector<double> q_, d_;
  double max_decrease_ = 0.0;
  double last_s_ = 0.0;
};

}  // namespace detail

/// Unconstrained capacity of a discrete-input channel.
template <class Channel>
BlahutArimotoResult blahut_arimoto(const Channel& w, const BlahutArimotoOptions& opt = {}) {
  return detail::ConstrainedSolver<Channel>(w, {}, 0.0, opt).run();
}

/// Capacity subject to sum_l p_l costs_l <= budget.
template <class Channel>
BlahutArimotoResult blahut_arimoto(const Channel& w, std::span<const double> costs,
                                   double budget, const BlahutArimotoOptions& opt = {}) {
  if (costs.size() != w.inputs()) throw DomainError("blahut_arimoto: cost size mismatch");
  if (!(budget > 0.0)) throw DomainError("blahut_arimoto: power budget must be positive");
  if (*std::min_element(costs.begin(), costs.end()) > budget) {
    throw DomainError("blahut_arimoto: power constraint infeasible");
  }
  return detail::ConstrainedSolver<Channel>(w, costs, budget, opt).run();
}

template <class Channel>
BlahutArimotoResult blahut_arimoto(const Channel& w, const std::vector<double>& costs,
                                   double budget, const BlahutArimotoOptions& opt = {}) {
  return blahut_arimoto(w, std::span<const double>(costs), budget, opt);
}

inline BlahutArimotoResult blahut_arimoto(const TransitionMatrix& w,
                                          const BlahutArimotoOptions& opt = {}) {
  return blahut_arimoto(DenseChannel(w), opt);
}

inline BlahutArimotoResult blahut_arimoto(const TransitionMatrix& w,
                                          std::span<const double> costs, double budget,
                                          const BlahutArimotoOptions& opt = {}) {
  return blahut_arimoto(DenseChannel(w), costs, budget, opt);
}

// ---------------------------------------------------------------------------
// Sweeps and scalar search.

struct SweepResult {
  std::vector<CapacityPoint> points;
  std::vector<std::size_t> monotonicity_violations;  // indices i with C_i < C_{i-1}
};

/// Evaluates `capacity_at(rho)` on an ascending grid. Capacity should not
/// decrease with rho; violations are reported, not thrown.
inline SweepResult capacity_sweep(const std::function<double(double)>& capacity_at,
                                  std::span<const double> rhos, int n = 2) {
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0.0)) throw DomainError("capacity_sweep: rho must be positive");
    if (i > 0 && !(rhos[i] > rhos[i - 1])) {
      throw DomainError("capacity_sweep: rho grid must be ascending");
    }
  }
  SweepResult out;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    out.points.push_back(make_capacity_point(rhos[i], capacity_at(rhos[i]), n));
    if (i > 0 && out.points[i].capacity_bits < out.points[i - 1].capacity_bits - 1e-9) {
      out.monotonicity_violations.push_back(i);
    }
  }
  return out;
}

struct OptimizationResult {
  double best_parameter = 0.0;
  double best_capacity = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> trace;
  bool flat = false;  // every grid value was equal
};

struct ScalarSearchOptions {
  int grid_points = 32;
  bool log_scale = false;  // grid and refinement uniform in log(parameter)
};

/// Coarse grid scan over [lo, hi] with `scan`, followed by golden-section
/// refinement with `objective` around the best grid point. The reported
/// optimum only uses `objective` values. Ties keep the lowest parameter.
inline OptimizationResult optimize_scalar(const std::function<double(double)>& scan,
                                          const std::function<double(double)>& objective,
                                          double lo, double hi, double tol,
                                          const ScalarSearchOptions& opt = {}) {
  if (!(lo < hi)) throw DomainError("optimize_scalar: need lo < hi");
  if (opt.log_scale && !(lo > 0.0)) throw DomainError("optimize_scalar: log scale needs lo > 0");
  if (opt.grid_points < 2) throw DomainError("optimize_scalar: need at least 2 grid points");
  const auto to_param = [&](double u) { return opt.log_scale ? std::exp(u) : u; };
  const double ulo = opt.log_scale ? std::log(lo) : lo;
  const double uhi = opt.log_scale ? std::log(hi) : hi;

  OptimizationResult r;
  auto eval_with = [&](const std::function<double(double)>& f, double u, bool record) {
    const double x = to_param(u);
    double v;
    try {
      v = f(x);
    } catch (const ConfigError& e) {
      throw ConfigError("objective failed at parameter " + format_number(x) + ": " + e.what());
    } catch (const std::exception& e) {
      throw ConvergenceError("objective failed at parameter " + format_number(x) + ": " +
                             e.what());
    }
    r.trace.emplace_back(x, v);
    if (record && v > r.best_capacity) {
      r.best_capacity = v;
      r.best_parameter = x;
    }
    return v;
  };
  auto eval = [&](double u) { return eval_with(objective, u, true); };
  const bool same = &scan == &objective;

  const int g = opt.grid_points;
  std::vector<double> us(static_cast<std::size_t>(g)), vs(static_cast<std::size_t>(g));
  int best = 0;
  for (int i = 0; i < g; ++i) {
    us[i] = i + 1 == g ? uhi : ulo + (uhi - ulo) * i / (g - 1);
    vs[i] = eval_with(scan, us[i], same);
    if (vs[i] > vs[best]) best = i;
  }
  r.flat = std::all_of(vs.begin(), vs.end(), [&](double v) { return v == vs[0]; });
  if (!same) eval(us[static_cast<std::size_t>(best)]);
  if (r.flat) return r;

  double a = us[static_cast<std::size_t>(std::max(0, best - 1))];
  double b = us[static_cast<std::size_t>(std::min(g - 1, best + 1))];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int it = 0; it < 200 && std::abs(to_param(b) - to_param(a)) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = eval(d);
    }
  }
  return r;
}

inline OptimizationResult optimize_scalar(const std::function<double(double)>& objective,
                                          double lo, double hi, double tol,
                                          const ScalarSearchOptions& opt = {}) {
  return optimize_scalar(objective, objective, lo, hi, tol, opt);
}

}  // namespace regen
