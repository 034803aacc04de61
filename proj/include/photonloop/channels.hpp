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
#include <optional>
#include <stdexcept>
#include <vector>

#include "photonloop/fock.hpp"

// Photon subtraction channels. A weak tap beam splitter with amplitude
// transmissivity t = cos(kappa) couples the signal to a vacuum ancilla that
// is measured by a click detector of efficiency eta. Tracing the ancilla in
// the Fock basis gives the Kraus family
//
//   K_m = sin(kappa)^m / sqrt(m!) * t^n * a^m,     m = 0 .. D-1,
//
// whose only nonzero entries sit on the m-th superdiagonal:
// K_m(i, i+m) = sqrt(binom(i+m, m)) t^i s^m with s = sin(kappa). The maps
// in this header exploit that structure: applying sum_m w_m K_m rho K_m^dag
// costs O(D^3) instead of the O(D^4) of dense operator products, which is
// what makes hundred-step loops at large cutoffs cheap.
//
// The detector only distinguishes "no photons" from "at least one", so the
// no-click branch weights K_m by (1 - eta)^m and the click branch by the
// complement. Dark counts are not modeled.

namespace photonloop {

// Success probabilities below this are treated as zero and no output state
// is produced.
inline constexpr double kDegenerateSuccess = 1e-15;

template <typename Scalar = double>
struct DetectorModel {
  Scalar eta = Scalar(1);
};

template <typename Scalar = double>
struct KrausSet {
  Scalar t = Scalar(0);
  Eigen::Index cutoff = 0;
  std::vector<ComplexMatrix<Scalar>> operators;  // operators[m]
};

// Outcome of a (possibly repeated) subtraction attempt. step_probabilities
// holds the per-attempt click probabilities; their sum is p_success. When
// p_success is numerically zero the output state is absent.
template <typename Scalar = double>
struct SubtractionResult {
  std::optional<DensityOperator<Scalar>> rho_out;
  Scalar p_success = Scalar(0);
  std::vector<Scalar> step_probabilities;
  int steps_allowed = 0;
};

namespace detail {

template <typename Scalar>
void check_transmissivity(Scalar t) {
  if (!(t >= Scalar(0)) || !(t < Scalar(1))) {
    throw std::invalid_argument(
        "transmissivity must satisfy 0 <= t < 1 (t = 1 taps nothing)");
  }
}

// Superdiagonal of K_m: coefficients(i) = K_m(i, i+m), i = 0 .. D-m-1.
// All entries lie in [0, 1], so the recurrence is numerically safe at any
// cutoff.
template <typename Scalar>
RealVector<Scalar> tap_coefficients(Scalar t, Eigen::Index cutoff,
                                    Eigen::Index m) {
  const Scalar s2 = (Scalar(1) - t) * (Scalar(1) + t);
  const Scalar s = std::sqrt(s2);
  RealVector<Scalar> u(cutoff - m);
  u(0) = std::pow(s, static_cast<Scalar>(m));
  for (Eigen::Index i = 1; i < cutoff - m; ++i) {
    u(i) = u(i - 1) * t *
           std::sqrt(static_cast<Scalar>(i + m) / static_cast<Scalar>(i));
  }
  return u;
}

// out += w * K_m rho K_m^dag for a single-mode rho, using only the
// superdiagonal coefficients.
template <typename Scalar>
void accumulate_tap_term(const ComplexMatrix<Scalar>& rho, Scalar t,
                         Eigen::Index m, Scalar w, ComplexMatrix<Scalar>& out) {
  const Eigen::Index d = rho.rows();
  const Eigen::Index n = d - m;
  const RealVector<Scalar> u = tap_coefficients(t, d, m);
  const ComplexVector<Scalar> uc =
      u.template cast<std::complex<Scalar>>();
  for (Eigen::Index j = 0; j < n; ++j) {
    out.col(j).head(n) +=
        (w * u(j)) * uc.cwiseProduct(rho.col(j + m).segment(m, n));
  }
}

// Same map applied to one mode of a two-mode rho (composite index
// r = i0 * D + i1, mode 0 slowest).
template <typename Scalar>
void accumulate_tap_term_mode(const ComplexMatrix<Scalar>& rho,
                              Eigen::Index cutoff, Scalar t, Eigen::Index m,
                              Scalar w, int mode, ComplexMatrix<Scalar>& out) {
  const Eigen::Index d = cutoff;
  const Eigen::Index n = d - m;
  const RealVector<Scalar> u = tap_coefficients(t, d, m);
  if (mode == 0) {
    for (Eigen::Index j0 = 0; j0 < n; ++j0) {
      for (Eigen::Index i0 = 0; i0 < n; ++i0) {
        out.block(i0 * d, j0 * d, d, d) +=
            (w * u(i0) * u(j0)) *
            rho.block((i0 + m) * d, (j0 + m) * d, d, d);
      }
    }
  } else {
    const ComplexVector<Scalar> uc =
        u.template cast<std::complex<Scalar>>();
    for (Eigen::Index j0 = 0; j0 < d; ++j0) {
      for (Eigen::Index j1 = 0; j1 < n; ++j1) {
        const Eigen::Index col = j0 * d + j1 + m;
        for (Eigen::Index i0 = 0; i0 < d; ++i0) {
          out.col(j0 * d + j1).segment(i0 * d, n) +=
              (w * u(j1)) * uc.cwiseProduct(rho.col(col).segment(i0 * d + m, n));
        }
      }
    }
  }
}

// sum_m w(m) K_m rho K_m^dag on a single mode; w(m) == 0 terms are skipped.
template <typename Scalar, typename WeightFn>
ComplexMatrix<Scalar> apply_tap_weighted(const ComplexMatrix<Scalar>& rho,
                                         Scalar t, WeightFn w) {
  const Eigen::Index d = rho.rows();
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    const Scalar wm = w(m);
    if (wm == Scalar(0)) {
      continue;
    }
    accumulate_tap_term(rho, t, m, wm, out);
  }
  return out;
}

// Two-mode variant acting on the chosen mode only.
template <typename Scalar, typename WeightFn>
ComplexMatrix<Scalar> apply_tap_weighted_mode(const ComplexMatrix<Scalar>& rho,
                                              Eigen::Index cutoff, Scalar t,
                                              WeightFn w, int mode) {
  ComplexMatrix<Scalar> out =
      ComplexMatrix<Scalar>::Zero(rho.rows(), rho.cols());
  for (Eigen::Index m = 0; m < cutoff; ++m) {
    const Scalar wm = w(m);
    if (wm == Scalar(0)) {
      continue;
    }
    accumulate_tap_term_mode(rho, cutoff, t, m, wm, mode, out);
  }
  return out;
}

template <typename Scalar>
auto no_click_weight(Scalar eta) {
  return [eta](Eigen::Index m) {
    return std::pow(Scalar(1) - eta, static_cast<Scalar>(m));
  };
}

template <typename Scalar>
auto click_weight(Scalar eta) {
  return [eta](Eigen::Index m) {
    return Scalar(1) - std::pow(Scalar(1) - eta, static_cast<Scalar>(m));
  };
}

template <typename Scalar>
void check_one_mode(const DensityOperator<Scalar>& rho, Eigen::Index cutoff) {
  if (rho.modes != 1 || rho.cutoff != cutoff) {
    throw std::invalid_argument(
        "channel expects a one-mode state at the channel cutoff");
  }
}

}  // namespace detail

// Kraus family of the tap beam splitter, materialized as dense matrices.
// The conditional maps below do not use these matrices (they work from the
// superdiagonal coefficients directly); the dense form exists for
// inspection and for verifying the completeness relation.
template <typename Scalar = double>
KrausSet<Scalar> tap_kraus(Scalar t, Eigen::Index cutoff) {
  detail::check_cutoff(cutoff);
  detail::check_transmissivity(t);
  KrausSet<Scalar> set;
  set.t = t;
  set.cutoff = cutoff;
  set.operators.reserve(static_cast<size_t>(cutoff));
  for (Eigen::Index m = 0; m < cutoff; ++m) {
    ComplexMatrix<Scalar> k = ComplexMatrix<Scalar>::Zero(cutoff, cutoff);
    const RealVector<Scalar> u = detail::tap_coefficients(t, cutoff, m);
    for (Eigen::Index i = 0; i < cutoff - m; ++i) {
      k(i, i + m) = u(i);
    }
    set.operators.push_back(std::move(k));
  }
  return set;
}

// Unnormalized state after the detector stayed silent. Its trace is the
// no-click probability.
template <typename Scalar>
DensityOperator<Scalar> no_click_map(const DensityOperator<Scalar>& rho,
                                     const KrausSet<Scalar>& kraus,
                                     const DetectorModel<Scalar>& det) {
  detail::check_one_mode(rho, kraus.cutoff);
  DensityOperator<Scalar> out;
  out.matrix = detail::apply_tap_weighted(rho.matrix, kraus.t,
                                          detail::no_click_weight(det.eta));
  out.cutoff = rho.cutoff;
  out.modes = 1;
  return out;
}

// Unnormalized state conditioned on a click. Together with no_click_map the
// two branches add up to the trace-preserving tapped channel.
template <typename Scalar>
DensityOperator<Scalar> click_map(const DensityOperator<Scalar>& rho,
                                  const KrausSet<Scalar>& kraus,
                                  const DetectorModel<Scalar>& det) {
  detail::check_one_mode(rho, kraus.cutoff);
  DensityOperator<Scalar> out;
  out.matrix = detail::apply_tap_weighted(rho.matrix, kraus.t,
                                          detail::click_weight(det.eta));
  out.cutoff = rho.cutoff;
  out.modes = 1;
  return out;
}

// Repeat-until-click subtraction: after each silent attempt the attenuated
// state is sent around again, for at most N attempts. The heralded output
// averages the click branches of every attempt; runs with no click within
// the budget are discarded.
template <typename Scalar>
SubtractionResult<Scalar> adaptive_subtraction(const DensityOperator<Scalar>& rho,
                                               Scalar t,
                                               const DetectorModel<Scalar>& det,
                                               int steps) {
  if (steps < 1) {
    throw std::invalid_argument("adaptive_subtraction needs at least one step");
  }
  detail::check_transmissivity(t);
  if (rho.modes != 1) {
    throw std::invalid_argument("adaptive_subtraction expects a one-mode state");
  }
  const Eigen::Index d = rho.cutoff;
  const auto wc = detail::click_weight(det.eta);
  const auto wn = detail::no_click_weight(det.eta);

  SubtractionResult<Scalar> result;
  result.steps_allowed = steps;
  result.step_probabilities.reserve(static_cast<size_t>(steps));

  ComplexMatrix<Scalar> sigma = rho.matrix;
  ComplexMatrix<Scalar> accum = ComplexMatrix<Scalar>::Zero(d, d);
  for (int n = 0; n < steps; ++n) {
    const ComplexMatrix<Scalar> clicked =
        detail::apply_tap_weighted(sigma, t, wc);
    result.step_probabilities.push_back(clicked.trace().real());
    accum += clicked;
    if (n + 1 < steps) {
      sigma = detail::apply_tap_weighted(sigma, t, wn);
    }
  }
  Scalar p(0);
  for (Scalar pn : result.step_probabilities) {
    p += pn;
  }
  result.p_success = p;
  if (p >= Scalar(kDegenerateSuccess)) {
    DensityOperator<Scalar> out;
    out.matrix = accum / accum.trace().real();
    out.cutoff = d;
    out.modes = 1;
    result.rho_out = std::move(out);
  }
  return result;
}

template <typename Scalar>
SubtractionResult<Scalar> single_step_subtraction(
    const DensityOperator<Scalar>& rho, Scalar t,
    const DetectorModel<Scalar>& det) {
  return adaptive_subtraction(rho, t, det, 1);
}

// Weak-coupling approximation of the loop with an ideal detector: the
// output is a single subtraction applied to a mixture of attenuated copies,
//
//   rho_out ~ a [ (1-t^2) sum_{k=0}^{N} t^{k n} rho t^{k n} ] a^dag,
//
// with success probability (1-t^2) sum_{k=0}^{N} Tr[rho t^{2k n} n]. The
// sum has N+1 terms, so steps = 0 is meaningful here (a single attempt) and
// the step count convention sits one off from the exact loop. Multi-photon
// losses through the tap are dropped entirely; the exact channel keeps
// them.
template <typename Scalar>
SubtractionResult<Scalar> approx_adaptive_subtraction(
    const DensityOperator<Scalar>& rho, Scalar t, int steps) {
  if (steps < 0) {
    throw std::invalid_argument(
        "approx_adaptive_subtraction needs a nonnegative step count");
  }
  detail::check_transmissivity(t);
  if (rho.modes != 1) {
    throw std::invalid_argument(
        "approx_adaptive_subtraction expects a one-mode state");
  }
  const Eigen::Index d = rho.cutoff;
  const Scalar one_minus_t2 = (Scalar(1) - t) * (Scalar(1) + t);

  RealVector<Scalar> tpow(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    tpow(i) = std::pow(t, static_cast<Scalar>(i));
  }

  SubtractionResult<Scalar> result;
  result.steps_allowed = steps;
  result.step_probabilities.reserve(static_cast<size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    Scalar pk(0);
    for (Eigen::Index i = 0; i < d; ++i) {
      pk += rho.matrix(i, i).real() *
            std::pow(tpow(i) * tpow(i), static_cast<Scalar>(k)) *
            static_cast<Scalar>(i);
    }
    result.step_probabilities.push_back(one_minus_t2 * pk);
  }
  Scalar p(0);
  for (Scalar pk : result.step_probabilities) {
    p += pk;
  }
  result.p_success = p;
  if (p < Scalar(kDegenerateSuccess)) {
    return result;
  }

  // Mixture of attenuated copies, entrywise: the geometric sum over k
  // collapses to a closed form per matrix element.
  ComplexMatrix<Scalar> mix(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const Scalar q = tpow(i) * tpow(j);
      Scalar geom;
      if (q == Scalar(1)) {
        geom = static_cast<Scalar>(steps + 1);
      } else {
        geom = (Scalar(1) - std::pow(q, static_cast<Scalar>(steps + 1))) /
               (Scalar(1) - q);
      }
      mix(i, j) = one_minus_t2 * geom * rho.matrix(i, j);
    }
  }
  // Single subtraction a . a^dag of the mixture.
  ComplexMatrix<Scalar> sub = ComplexMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index j = 0; j + 1 < d; ++j) {
    for (Eigen::Index i = 0; i + 1 < d; ++i) {
      sub(i, j) = std::sqrt(static_cast<Scalar>(i + 1)) *
                  std::sqrt(static_cast<Scalar>(j + 1)) * mix(i + 1, j + 1);
    }
  }
  DensityOperator<Scalar> out;
  out.matrix = sub / sub.trace().real();
  out.cutoff = d;
  out.modes = 1;
  result.rho_out = std::move(out);
  return result;
}

// Exact single subtraction a rho a^dag / Tr, the t -> 1 limit of the
// heralded output.
template <typename Scalar>
DensityOperator<Scalar> ideal_subtraction(const DensityOperator<Scalar>& rho) {
  if (rho.modes != 1) {
    throw std::invalid_argument("ideal_subtraction expects a one-mode state");
  }
  const Eigen::Index d = rho.cutoff;
  ComplexMatrix<Scalar> sub = ComplexMatrix<Scalar>::Zero(d, d);
  for (Eigen::Index j = 0; j + 1 < d; ++j) {
    for (Eigen::Index i = 0; i + 1 < d; ++i) {
      sub(i, j) = std::sqrt(static_cast<Scalar>(i + 1)) *
                  std::sqrt(static_cast<Scalar>(j + 1)) *
                  rho.matrix(i + 1, j + 1);
    }
  }
  const Scalar w = sub.trace().real();
  if (w < Scalar(kDegenerateSuccess)) {
    throw std::invalid_argument("ideal_subtraction: state has no photons");
  }
  return {ComplexMatrix<Scalar>(sub / w), d, 1};
}

// Probability that the detector would ever fire on this state: one minus
// the no-click weight of every Fock level. No loop can beat this bound.
template <typename Scalar>
Scalar max_success_probability(const DensityOperator<Scalar>& rho,
                               const DetectorModel<Scalar>& det) {
  if (rho.modes != 1) {
    throw std::invalid_argument(
        "max_success_probability expects a one-mode state");
  }
  Scalar blind(0);
  Scalar w(1);
  const Scalar keep = Scalar(1) - det.eta;
  for (Eigen::Index n = 0; n < rho.cutoff; ++n) {
    blind += w * rho.matrix(n, n).real();
    w *= keep;
  }
  return Scalar(1) - blind;
}

}  // namespace photonloop
