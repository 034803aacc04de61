// Copyright 2026 the photonloop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "photonloop/errors.hpp"

// Truncated Fock-space linear algebra. Everything downstream (state
// factories, subtraction channels, metrics) is built from the handful of
// primitives in this header.
//
// Conventions used throughout the library:
//   - a mode keeps photon numbers 0 .. D-1, where D is the cutoff;
//   - two-mode objects live on the Kronecker-product space with the row
//     index r = i0 * D + i1, i.e. mode 0 varies slowest;
//   - quadratures are x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)),
//     so the vacuum has variance 1/2 in both.

namespace photonloop {

template <typename Scalar = double>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar = double>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Density operator on one or two truncated modes. The matrix of a
// normalized state has unit trace; conditional (heralded) states are kept
// unnormalized, with the trace equal to the branch probability.
template <typename Scalar = double>
struct DensityOperator {
  ComplexMatrix<Scalar> matrix;
  Eigen::Index cutoff = 0;
  int modes = 1;

  Eigen::Index dim() const { return matrix.rows(); }

  Scalar trace() const { return matrix.trace().real(); }
};

// Pure state amplitudes over the same basis.
template <typename Scalar = double>
struct FockVector {
  ComplexVector<Scalar> amplitudes;
  Eigen::Index cutoff = 0;
  int modes = 1;

  Eigen::Index dim() const { return amplitudes.size(); }
};

// Operator acting on a single mode.
template <typename Scalar = double>
struct ModeOperator {
  ComplexMatrix<Scalar> matrix;
  Eigen::Index cutoff = 0;
};

namespace detail {

inline void check_cutoff(Eigen::Index cutoff) {
  if (cutoff < 2) {
    throw std::invalid_argument("cutoff must be at least 2, got " +
                                std::to_string(cutoff));
  }
}

}  // namespace detail

// Annihilation operator: sqrt(n) on the first superdiagonal.
template <typename Scalar = double>
ModeOperator<Scalar> make_annihilation(Eigen::Index cutoff) {
  detail::check_cutoff(cutoff);
  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(cutoff, cutoff);
  for (Eigen::Index n = 1; n < cutoff; ++n) {
    m(n - 1, n) = std::sqrt(static_cast<Scalar>(n));
  }
  return {std::move(m), cutoff};
}

// Photon number operator diag(0, 1, ..., D-1).
template <typename Scalar = double>
ModeOperator<Scalar> make_number(Eigen::Index cutoff) {
  detail::check_cutoff(cutoff);
  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(cutoff, cutoff);
  for (Eigen::Index n = 0; n < cutoff; ++n) {
    m(n, n) = static_cast<Scalar>(n);
  }
  return {std::move(m), cutoff};
}

// Applies f to the (real) diagonal of a diagonal operator; used for
// functions of the number operator such as t^n or (1 - eta)^n.
template <typename Scalar, typename F>
ModeOperator<Scalar> operator_function_diagonal(const ModeOperator<Scalar>& op,
                                                F f) {
  const Eigen::Index d = op.matrix.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i != j && op.matrix(i, j) != std::complex<Scalar>(0)) {
        throw std::invalid_argument(
            "operator_function_diagonal requires a diagonal operator");
      }
    }
  }
  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    m(i, i) = std::complex<Scalar>(f(op.matrix(i, i).real()));
  }
  return {std::move(m), op.cutoff};
}

// Dense matrix exponential. Anti-Hermitian generators yield unitaries.
template <typename Scalar>
ComplexMatrix<Scalar> operator_exponential(const ComplexMatrix<Scalar>& gen) {
  if (!gen.allFinite()) {
    throw numerical_error("operator_exponential: non-finite generator");
  }
  return gen.exp();
}

// Kronecker products, with mode 0 as the slow index.
template <typename Scalar>
ComplexMatrix<Scalar> tensor(const ComplexMatrix<Scalar>& a,
                             const ComplexMatrix<Scalar>& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

template <typename Scalar>
FockVector<Scalar> tensor(const FockVector<Scalar>& a,
                          const FockVector<Scalar>& b) {
  if (a.modes != 1 || b.modes != 1) {
    throw std::invalid_argument("tensor of states expects one mode per factor");
  }
  if (a.cutoff != b.cutoff) {
    throw std::invalid_argument("tensor of states expects equal cutoffs");
  }
  FockVector<Scalar> out;
  out.amplitudes = Eigen::kroneckerProduct(a.amplitudes, b.amplitudes).eval();
  out.cutoff = a.cutoff;
  out.modes = 2;
  return out;
}

template <typename Scalar>
DensityOperator<Scalar> tensor(const DensityOperator<Scalar>& a,
                               const DensityOperator<Scalar>& b) {
  if (a.modes != 1 || b.modes != 1) {
    throw std::invalid_argument("tensor of states expects one mode per factor");
  }
  if (a.cutoff != b.cutoff) {
    throw std::invalid_argument("tensor of states expects equal cutoffs");
  }
  DensityOperator<Scalar> out;
  out.matrix = Eigen::kroneckerProduct(a.matrix, b.matrix).eval();
  out.cutoff = a.cutoff;
  out.modes = 2;
  return out;
}

// Traces out one mode of a two-mode density operator.
template <typename Scalar>
DensityOperator<Scalar> partial_trace(const DensityOperator<Scalar>& rho,
                                      int keep) {
  if (rho.modes != 2) {
    throw std::invalid_argument("partial_trace expects a two-mode state");
  }
  if (keep != 0 && keep != 1) {
    throw std::invalid_argument("partial_trace: keep must be 0 or 1");
  }
  const Eigen::Index d = rho.cutoff;
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(d, d);
  if (keep == 0) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        std::complex<Scalar> s(0);
        for (Eigen::Index k = 0; k < d; ++k) {
          s += rho.matrix(i * d + k, j * d + k);
        }
        out(i, j) = s;
      }
    }
  } else {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        std::complex<Scalar> s(0);
        for (Eigen::Index k = 0; k < d; ++k) {
          s += rho.matrix(k * d + i, k * d + j);
        }
        out(i, j) = s;
      }
    }
  }
  return {std::move(out), d, 1};
}

// Tr(rho * op), evaluated without forming the product.
template <typename Scalar>
std::complex<Scalar> expectation(const DensityOperator<Scalar>& rho,
                                 const ComplexMatrix<Scalar>& op) {
  if (rho.dim() != op.rows() || op.rows() != op.cols()) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  return rho.matrix.transpose().cwiseProduct(op).sum();
}

template <typename Scalar>
std::complex<Scalar> expectation(const DensityOperator<Scalar>& rho,
                                 const ModeOperator<Scalar>& op) {
  return expectation(rho, op.matrix);
}

// |psi><psi| as a density operator, preserving any non-unit norm.
template <typename Scalar>
DensityOperator<Scalar> to_density(const FockVector<Scalar>& psi) {
  DensityOperator<Scalar> out;
  out.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  out.cutoff = psi.cutoff;
  out.modes = psi.modes;
  return out;
}

// Per-mode populations of the top two Fock levels, maximized over modes.
// This is the cutoff-adequacy figure every factory reports: a state whose
// tail mass is not small is being visibly clipped by the truncation.
template <typename Scalar>
Scalar tail_mass(const DensityOperator<Scalar>& rho) {
  const Eigen::Index d = rho.cutoff;
  if (rho.modes == 1) {
    return rho.matrix(d - 1, d - 1).real() + rho.matrix(d - 2, d - 2).real();
  }
  Scalar worst(0);
  for (int mode = 0; mode < 2; ++mode) {
    RealVector<Scalar> pop = RealVector<Scalar>::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) {
        const Eigen::Index r = (mode == 0) ? i * d + k : k * d + i;
        pop(i) += rho.matrix(r, r).real();
      }
    }
    worst = std::max(worst, pop(d - 1) + pop(d - 2));
  }
  return worst;
}

template <typename Scalar>
Scalar tail_mass(const FockVector<Scalar>& psi) {
  return tail_mass(to_density(psi));
}

}  // namespace photonloop
