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

#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "regen/errors.hpp"

namespace regen {

/// Column-stochastic matrix of symbol transition probabilities:
/// entry (k, l) = P(output k | input l).
class TransitionMatrix {
 public:
  TransitionMatrix() = default;

  /// Validates entries in [0, 1] and unit column sums within `tol`.
  explicit TransitionMatrix(Eigen::MatrixXd m, double tol = 1e-10)
      : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.cols() == 0) {
      throw DomainError("transition matrix: empty");
    }
    for (Eigen::Index l = 0; l < m_.cols(); ++l) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < m_.rows(); ++k) {
        const double v = m_(k, l);
        if (!(v >= -tol && v <= 1.0 + tol)) {
          throw DomainError("transition matrix: entry out of [0, 1]");
        }
        s += v;
      }
      if (std::abs(s - 1.0) > tol) {
        throw DomainError("transition matrix: column " + std::to_string(l) +
                          " sums to " + std::to_string(s));
      }
    }
  }

  static TransitionMatrix identity(Eigen::Index m) {
    return TransitionMatrix(Eigen::MatrixXd::Identity(m, m));
  }

  Eigen::Index outputs() const { return m_.rows(); }
  Eigen::Index inputs() const { return m_.cols(); }
  double operator()(Eigen::Index k, Eigen::Index l) const { return m_(k, l); }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

namespace detail {

inline void normalize_columns(Eigen::MatrixXd& m) {
  for (Eigen::Index l = 0; l < m.cols(); ++l) {
    auto col = m.col(l);
    col = col.cwiseMax(0.0);
    const double s = col.sum();
    if (s > 0.0) col /= s;
  }
}

}  // namespace detail

using SparseKernel = Eigen::SparseMatrix<double, Eigen::ColMajor>;

namespace detail {

// Entries below this are dropped from sparse products; they are far below
// anything that moves a column sum or a logarithm.
inline constexpr double kSparseFloor = 1e-280;

inline void normalize_columns(SparseKernel& m) {
  for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
    double s = 0.0;
    for (SparseKernel::InnerIterator it(m, c); it; ++it) s += it.value();
    if (s > 0.0) {
      for (SparseKernel::InnerIterator it(m, c); it; ++it) it.valueRef() /= s;
    }
  }
}

}  // namespace detail

/// W^R in sparse form; suited to lattices whose transitions are confined to
/// a band around the diagonal.
inline SparseKernel chain_sparse(const TransitionMatrix& w, int r) {
  if (r < 1) throw DomainError("chain_matrix: R must be >= 1");
  if (w.outputs() != w.inputs()) throw DomainError("chain_matrix: matrix not square");
  SparseKernel base = w.matrix().sparseView(1.0, detail::kSparseFloor);
  SparseKernel result;
  bool have = false;
  for (unsigned e = static_cast<unsigned>(r); e != 0; e >>= 1) {
    if (e & 1u) {
      if (have) {
        result = (base * result).pruned(1.0, detail::kSparseFloor);
      } else {
        result = base;
        have = true;
      }
      detail::normalize_columns(result);
    }
    if (e > 1) {
      base = (base * base).pruned(1.0, detail::kSparseFloor);
      detail::normalize_columns(base);
    }
  }
  result.makeCompressed();
  return result;
}

/// W^R by repeated squaring, renormalizing columns after every product.
inline TransitionMatrix chain_matrix(const TransitionMatrix& w, int r) {
  if (r < 1) throw DomainError("chain_matrix: R must be >= 1");
  if (w.outputs() != w.inputs()) throw DomainError("chain_matrix: matrix not square");
  if (r == 1) return w;
  const double fill = static_cast<double>((w.matrix().array() > detail::kSparseFloor).count()) /
                      static_cast<double>(w.matrix().size());
  if (w.inputs() >= 256 && fill < 0.1) {
    return TransitionMatrix(Eigen::MatrixXd(chain_sparse(w, r)), 1e-9);
  }
  Eigen::MatrixXd base = w.matrix();
  Eigen::MatrixXd result;
  bool have = false;
  Eigen::MatrixXd tmp;
  for (unsigned e = static_cast<unsigned>(r); e != 0; e >>= 1) {
    if (e & 1u) {
      if (have) {
        tmp.noalias() = base * result;
        result.swap(tmp);
      } else {
        result = base;
        have = true;
      }
      detail::normalize_columns(result);
    }
    if (e > 1) {
      tmp.noalias() = base * base;
      base.swap(tmp);
      detail::normalize_columns(base);
    }
  }
  return TransitionMatrix(std::move(result), 1e-9);
}

}  // namespace regen
