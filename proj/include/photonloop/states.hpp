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

// Input-state factories in the truncated Fock basis. Squeezing strength is
// given in decibels of quadrature variance relative to vacuum:
// squeeze_db = -10 log10(2 V_min), so a pure state squeezed by "s dB" has
// minimal variance 10^(-s/10) / 2.
//
// Every factory renormalizes after truncation and rejects states whose top
// two Fock levels still hold more than tail_tol population; the default
// tolerance is strict so that an inadequate cutoff fails loudly rather than
// silently biasing results.

namespace photonloop {

inline constexpr double kDefaultTailTolerance = 1e-8;

// Squeezed thermal state parameters. Pure when both dB values agree.
template <typename Scalar = double>
struct SqueezingSpec {
  Scalar squeeze_db;
  Scalar antisqueeze_db;

  Scalar r() const {
    return (squeeze_db + antisqueeze_db) * std::log(Scalar(10)) / Scalar(40);
  }

  Scalar nbar() const {
    return (std::pow(Scalar(10), (antisqueeze_db - squeeze_db) / Scalar(20)) -
            Scalar(1)) /
           Scalar(2);
  }
};

// Even (+) or odd (-) superposition of coherent states with amplitudes
// +alpha and -alpha.
template <typename Scalar = double>
struct CatSpec {
  std::complex<Scalar> alpha;
  int parity_sign = +1;
};

template <typename Scalar = double>
Scalar db_to_r(Scalar db) {
  if (db < Scalar(0)) {
    throw std::invalid_argument("db_to_r: decibel value must be nonnegative");
  }
  return db * std::log(Scalar(10)) / Scalar(20);
}

namespace detail {

template <typename Scalar>
void check_tail(const FockVector<Scalar>& psi, Scalar tail_tol,
                const char* factory) {
  const Scalar tail = tail_mass(psi);
  if (tail > tail_tol) {
    throw truncation_error(std::string(factory) +
                               ": cutoff too small, tail mass " +
                               std::to_string(static_cast<double>(tail)),
                           static_cast<double>(tail));
  }
}

template <typename Scalar>
void check_tail(const DensityOperator<Scalar>& rho, Scalar tail_tol,
                const char* factory) {
  const Scalar tail = tail_mass(rho);
  if (tail > tail_tol) {
    throw truncation_error(std::string(factory) +
                               ": cutoff too small, tail mass " +
                               std::to_string(static_cast<double>(tail)),
                           static_cast<double>(tail));
  }
}

// Unnormalized coherent amplitudes e^(-|alpha|^2/2) alpha^n / sqrt(n!).
template <typename Scalar>
ComplexVector<Scalar> coherent_amplitudes(std::complex<Scalar> alpha,
                                          Eigen::Index cutoff) {
  ComplexVector<Scalar> amps(cutoff);
  amps(0) = std::exp(-std::norm(alpha) / Scalar(2));
  for (Eigen::Index n = 1; n < cutoff; ++n) {
    amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<Scalar>(n));
  }
  return amps;
}

// Thermal state with mean occupation nbar.
template <typename Scalar>
ComplexMatrix<Scalar> thermal_matrix(Scalar nbar, Eigen::Index dim) {
  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(dim, dim);
  if (nbar <= Scalar(0)) {
    m(0, 0) = Scalar(1);
    return m;
  }
  const Scalar ratio = nbar / (Scalar(1) + nbar);
  Scalar p = Scalar(1) / (Scalar(1) + nbar);
  for (Eigen::Index n = 0; n < dim; ++n) {
    m(n, n) = p;
    p *= ratio;
  }
  return m;
}

// Squeeze unitary exp((r/2)(a^2 - a^dag^2)) at the given dimension.
template <typename Scalar>
ComplexMatrix<Scalar> squeeze_matrix(Scalar r, Eigen::Index dim) {
  const ModeOperator<Scalar> a = make_annihilation<Scalar>(dim);
  const ComplexMatrix<Scalar> a2 = a.matrix * a.matrix;
  const ComplexMatrix<Scalar> gen =
      (r / Scalar(2)) * (a2 - a2.adjoint()).eval();
  return operator_exponential(gen);
}

}  // namespace detail

template <typename Scalar = double>
FockVector<Scalar> coherent(std::complex<Scalar> alpha, Eigen::Index cutoff,
                            Scalar tail_tol = Scalar(kDefaultTailTolerance)) {
  detail::check_cutoff(cutoff);
  FockVector<Scalar> psi;
  psi.amplitudes = detail::coherent_amplitudes(alpha, cutoff);
  psi.amplitudes.normalize();
  psi.cutoff = cutoff;
  psi.modes = 1;
  detail::check_tail(psi, tail_tol, "coherent");
  return psi;
}

template <typename Scalar = double>
FockVector<Scalar> cat_state(const CatSpec<Scalar>& spec, Eigen::Index cutoff,
                             Scalar tail_tol = Scalar(kDefaultTailTolerance)) {
  detail::check_cutoff(cutoff);
  if (spec.parity_sign != +1 && spec.parity_sign != -1) {
    throw std::invalid_argument("cat_state: parity sign must be +1 or -1");
  }
  ComplexVector<Scalar> amps =
      detail::coherent_amplitudes(spec.alpha, cutoff) +
      Scalar(spec.parity_sign) *
          detail::coherent_amplitudes(-spec.alpha, cutoff);
  const Scalar norm = amps.norm();
  if (!(norm > Scalar(0))) {
    throw std::invalid_argument(
        "cat_state: superposition has zero norm (odd cat needs alpha != 0)");
  }
  // Clean up the parity that is exact in infinite precision.
  for (Eigen::Index n = spec.parity_sign == +1 ? 1 : 0; n < cutoff; n += 2) {
    amps(n) = Scalar(0);
  }
  FockVector<Scalar> psi;
  psi.amplitudes = amps / amps.norm();
  psi.cutoff = cutoff;
  psi.modes = 1;
  detail::check_tail(psi, tail_tol, "cat_state");
  return psi;
}

// Pure squeezed vacuum from the even-photon closed form
// c_{2k} = (cosh r)^(-1/2) (-tanh r)^k sqrt((2k)!) / (2^k k!).
template <typename Scalar = double>
FockVector<Scalar> squeezed_vacuum(
    Scalar squeeze_db, Eigen::Index cutoff,
    Scalar tail_tol = Scalar(kDefaultTailTolerance)) {
  detail::check_cutoff(cutoff);
  const Scalar r = db_to_r(squeeze_db);
  const Scalar th = std::tanh(r);
  ComplexVector<Scalar> amps = ComplexVector<Scalar>::Zero(cutoff);
  Scalar c = Scalar(1) / std::sqrt(std::cosh(r));
  amps(0) = c;
  for (Eigen::Index k = 1; 2 * k < cutoff; ++k) {
    c *= -th * std::sqrt((Scalar(2 * k) - Scalar(1)) / Scalar(2 * k));
    amps(2 * k) = c;
  }
  FockVector<Scalar> psi;
  psi.amplitudes = amps / amps.norm();
  psi.cutoff = cutoff;
  psi.modes = 1;
  detail::check_tail(psi, tail_tol, "squeezed_vacuum");
  return psi;
}

// Squeezed thermal state S(r) rho_thermal(nbar) S(r)^dag, the minimal
// Gaussian model matching a given squeezing / antisqueezing pair. Built at
// a doubled cutoff so the truncated squeeze unitary stays accurate, then
// cropped back.
template <typename Scalar = double>
DensityOperator<Scalar> squeezed_thermal(
    const SqueezingSpec<Scalar>& spec, Eigen::Index cutoff,
    Scalar tail_tol = Scalar(kDefaultTailTolerance)) {
  detail::check_cutoff(cutoff);
  if (spec.squeeze_db < Scalar(0)) {
    throw std::invalid_argument("squeezed_thermal: squeeze_db must be >= 0");
  }
  if (spec.antisqueeze_db < spec.squeeze_db) {
    throw std::invalid_argument(
        "squeezed_thermal: antisqueeze_db must be >= squeeze_db");
  }
  const Eigen::Index padded = 2 * cutoff;
  const ComplexMatrix<Scalar> s = detail::squeeze_matrix(spec.r(), padded);
  const ComplexMatrix<Scalar> th =
      detail::thermal_matrix(spec.nbar(), padded);
  const ComplexMatrix<Scalar> full = s * th * s.adjoint();
  DensityOperator<Scalar> rho;
  rho.matrix = full.topLeftCorner(cutoff, cutoff);
  rho.matrix = ((rho.matrix + rho.matrix.adjoint()) / Scalar(2)).eval();
  rho.matrix /= rho.matrix.trace().real();
  rho.cutoff = cutoff;
  rho.modes = 1;
  detail::check_tail(rho, tail_tol, "squeezed_thermal");
  return rho;
}

// Two-mode squeezed vacuum: amplitudes (tanh r)^f / cosh r on the diagonal
// pairs |f, f>.
template <typename Scalar = double>
FockVector<Scalar> two_mode_squeezed(
    Scalar squeeze_db, Eigen::Index cutoff,
    Scalar tail_tol = Scalar(kDefaultTailTolerance)) {
  detail::check_cutoff(cutoff);
  const Scalar r = db_to_r(squeeze_db);
  const Scalar lambda = std::tanh(r);
  ComplexVector<Scalar> amps = ComplexVector<Scalar>::Zero(cutoff * cutoff);
  Scalar c = Scalar(1) / std::cosh(r);
  for (Eigen::Index f = 0; f < cutoff; ++f) {
    amps(f * cutoff + f) = c;
    c *= lambda;
  }
  FockVector<Scalar> psi;
  psi.amplitudes = amps / amps.norm();
  psi.cutoff = cutoff;
  psi.modes = 2;
  detail::check_tail(psi, tail_tol, "two_mode_squeezed");
  return psi;
}

// |n> basis state; handy for oracles and as the trivial input.
template <typename Scalar = double>
FockVector<Scalar> number_state(Eigen::Index n, Eigen::Index cutoff) {
  detail::check_cutoff(cutoff);
  if (n < 0 || n >= cutoff) {
    throw std::invalid_argument("number_state: level outside cutoff");
  }
  FockVector<Scalar> psi;
  psi.amplitudes = ComplexVector<Scalar>::Zero(cutoff);
  psi.amplitudes(n) = Scalar(1);
  psi.cutoff = cutoff;
  psi.modes = 1;
  return psi;
}

template <typename Scalar = double>
FockVector<Scalar> vacuum_state(Eigen::Index cutoff) {
  return number_state<Scalar>(0, cutoff);
}

}  // namespace photonloop
