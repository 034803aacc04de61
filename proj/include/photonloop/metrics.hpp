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

#include <cmath>
#include <complex>
#include <stdexcept>

#include "photonloop/fock.hpp"

// State-quality measures: Wigner function values, overlap fidelity with a
// pure target, quadrature covariance matrices, and the Gaussian logarithmic
// negativity of a two-mode state.
//
// The Wigner function is normalized so that it integrates to one over the
// (x, p) plane; its value anywhere is then bounded by 1/pi in magnitude,
// and a negative value at the origin certifies a non-Gaussian state.

namespace photonloop {

// Quadrature second moments of a two-mode state, ordered (x1, p1, x2, p2),
// with the first moments that were subtracted. Vacuum gives sigma = I/2.
template <typename Scalar = double>
struct CovarianceMatrix {
  Eigen::Matrix<Scalar, 4, 4> sigma;
  Eigen::Matrix<Scalar, 4, 1> mean;
};

namespace detail {

template <typename Scalar>
void check_normalized(const DensityOperator<Scalar>& rho, const char* where) {
  if (std::abs(rho.trace() - Scalar(1)) > Scalar(1e-8)) {
    throw std::invalid_argument(std::string(where) +
                                " expects a normalized state");
  }
}

// Tr[rho (A (x) B)] without forming the Kronecker product: contract mode 1
// against B blockwise, then mode 0 against A.
template <typename Scalar>
std::complex<Scalar> expectation_product(const DensityOperator<Scalar>& rho,
                                         const ComplexMatrix<Scalar>& a,
                                         const ComplexMatrix<Scalar>& b) {
  const Eigen::Index d = rho.cutoff;
  std::complex<Scalar> total(0);
  for (Eigen::Index i0 = 0; i0 < d; ++i0) {
    for (Eigen::Index j0 = 0; j0 < d; ++j0) {
      const std::complex<Scalar> inner =
          rho.matrix.block(i0 * d, j0 * d, d, d)
              .transpose()
              .cwiseProduct(b)
              .sum();
      total += a(j0, i0) * inner;
    }
  }
  return total;
}

}  // namespace detail

// W(0, 0) from the photon-number parity: (1/pi) sum_n (-1)^n rho_nn.
template <typename Scalar>
Scalar wigner_origin(const DensityOperator<Scalar>& rho) {
  if (rho.modes != 1) {
    throw std::invalid_argument("wigner_origin expects a one-mode state");
  }
  detail::check_normalized(rho, "wigner_origin");
  Scalar parity(0);
  Scalar sign(1);
  for (Eigen::Index n = 0; n < rho.cutoff; ++n) {
    parity += sign * rho.matrix(n, n).real();
    sign = -sign;
  }
  return parity / Scalar(EIGEN_PI);
}

// W(x, p) on a rectangular grid via the displaced parity operator
// W = (1/pi) Tr[rho D(beta) P D(beta)^dag], beta = (x + i p)/sqrt(2).
// One matrix exponential per grid point; meant for plots, not inner loops.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> wigner_grid(
    const DensityOperator<Scalar>& rho, const RealVector<Scalar>& xs,
    const RealVector<Scalar>& ps) {
  if (rho.modes != 1) {
    throw std::invalid_argument("wigner_grid expects a one-mode state");
  }
  detail::check_normalized(rho, "wigner_grid");
  const Eigen::Index d = rho.cutoff;
  const ModeOperator<Scalar> a = make_annihilation<Scalar>(d);
  ComplexVector<Scalar> parity(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    parity(n) = (n % 2 == 0) ? Scalar(1) : Scalar(-1);
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> w(xs.size(),
                                                          ps.size());
  for (Eigen::Index ix = 0; ix < xs.size(); ++ix) {
    for (Eigen::Index ip = 0; ip < ps.size(); ++ip) {
      const std::complex<Scalar> beta(xs(ix) / std::sqrt(Scalar(2)),
                                      ps(ip) / std::sqrt(Scalar(2)));
      const ComplexMatrix<Scalar> gen =
          beta * a.matrix.adjoint() - std::conj(beta) * a.matrix;
      const ComplexMatrix<Scalar> disp = operator_exponential(gen);
      // D P D^dag sandwiched against rho.
      const ComplexMatrix<Scalar> displaced_parity =
          disp * parity.asDiagonal() * disp.adjoint();
      w(ix, ip) =
          rho.matrix.transpose().cwiseProduct(displaced_parity).sum().real() /
          Scalar(EIGEN_PI);
    }
  }
  return w;
}

// Overlap <target| rho |target> with a pure target state.
template <typename Scalar>
Scalar fidelity(const DensityOperator<Scalar>& rho,
                const FockVector<Scalar>& target) {
  if (rho.dim() != target.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const std::complex<Scalar> v =
      target.amplitudes.dot(rho.matrix * target.amplitudes);
  return v.real();
}

// Quadrature covariance matrix of a two-mode state, first moments
// subtracted.
template <typename Scalar>
CovarianceMatrix<Scalar> covariance_matrix(const DensityOperator<Scalar>& rho) {
  if (rho.modes != 2) {
    throw std::invalid_argument("covariance_matrix expects a two-mode state");
  }
  detail::check_normalized(rho, "covariance_matrix");
  const Eigen::Index d = rho.cutoff;
  const ModeOperator<Scalar> a = make_annihilation<Scalar>(d);
  const ComplexMatrix<Scalar> x =
      (a.matrix + a.matrix.adjoint()) / std::sqrt(Scalar(2));
  const ComplexMatrix<Scalar> p = (a.matrix - a.matrix.adjoint()) /
                                  std::complex<Scalar>(Scalar(0),
                                                       std::sqrt(Scalar(2)));
  const ComplexMatrix<Scalar> eye = ComplexMatrix<Scalar>::Identity(d, d);

  // R_i as (mode-0 factor, mode-1 factor) pairs.
  const ComplexMatrix<Scalar>* factors[4][2] = {
      {&x, &eye}, {&p, &eye}, {&eye, &x}, {&eye, &p}};

  CovarianceMatrix<Scalar> cov;
  for (int i = 0; i < 4; ++i) {
    cov.mean(i) =
        detail::expectation_product(rho, *factors[i][0], *factors[i][1])
            .real();
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const ComplexMatrix<Scalar> a0 = *factors[i][0] * *factors[j][0];
      const ComplexMatrix<Scalar> b0 = *factors[i][1] * *factors[j][1];
      // Re<R_i R_j> is the symmetrized moment for Hermitian quadratures.
      const Scalar second =
          detail::expectation_product(rho, a0, b0).real();
      const Scalar value = second - cov.mean(i) * cov.mean(j);
      cov.sigma(i, j) = value;
      cov.sigma(j, i) = value;
    }
  }
  return cov;
}

// Entanglement of the Gaussian state with the same covariance matrix,
// through the partially transposed symplectic eigenvalue
//   Delta = det alpha + det beta - 2 det gamma,
//   nu = sqrt(2 (Delta - sqrt(Delta^2 - 4 det sigma))),
//   N = max(0, -log2 nu).
template <typename Scalar>
Scalar gaussian_log_negativity(const CovarianceMatrix<Scalar>& cov) {
  const Eigen::Matrix<Scalar, 2, 2> alpha = cov.sigma.template block<2, 2>(0, 0);
  const Eigen::Matrix<Scalar, 2, 2> beta = cov.sigma.template block<2, 2>(2, 2);
  const Eigen::Matrix<Scalar, 2, 2> gamma = cov.sigma.template block<2, 2>(0, 2);
  const Scalar delta = alpha.determinant() + beta.determinant() -
                       Scalar(2) * gamma.determinant();
  const Scalar det_sigma = cov.sigma.determinant();

  Scalar disc = delta * delta - Scalar(4) * det_sigma;
  if (disc < Scalar(0)) {
    if (disc < Scalar(-1e-12)) {
      throw numerical_error(
          "gaussian_log_negativity: covariance matrix is not physical");
    }
    disc = Scalar(0);
  }
  Scalar radicand = Scalar(2) * (delta - std::sqrt(disc));
  if (radicand < Scalar(0)) {
    if (radicand < Scalar(-1e-12)) {
      throw numerical_error(
          "gaussian_log_negativity: negative symplectic radicand");
    }
    radicand = Scalar(0);
  }
  const Scalar nu = std::sqrt(radicand);
  if (!(nu > Scalar(0))) {
    throw numerical_error("gaussian_log_negativity: degenerate eigenvalue");
  }
  return std::max(Scalar(0), -std::log2(nu));
}

// Tr[rho^2]; equals the squared Frobenius norm for Hermitian rho.
template <typename Scalar>
Scalar purity(const DensityOperator<Scalar>& rho) {
  return rho.matrix.squaredNorm();
}

}  // namespace photonloop
