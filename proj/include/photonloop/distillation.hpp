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

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "photonloop/channels.hpp"
#include "photonloop/metrics.hpp"

// Entanglement distillation by photon subtraction on both modes of a
// two-mode state. Each arm runs its own repeat-until-click loop with a
// private tap, detector, and step budget; a run counts as a success only
// when both arms click within budget. The arms never interact, so the
// two-sided conditional state is obtained by applying the summed one-arm
// branch maps to each mode in turn.

namespace photonloop {

template <typename Scalar = double>
struct DistillationResult {
  std::optional<DensityOperator<Scalar>> rho_out;
  Scalar p_success = Scalar(0);
  int steps_a = 0;
  int steps_b = 0;
  Scalar log_negativity_in = Scalar(0);
  Scalar log_negativity_out = Scalar(0);
};

// One conditional branch of a single arm: click exactly at attempt `step`
// (after step - 1 silent attempts), or the timeout branch that never
// clicked within the budget.
template <typename Scalar = double>
struct ArmBranch {
  Scalar t = Scalar(0);
  DetectorModel<Scalar> det;
  int step = 0;
  bool timeout = false;
  Eigen::Index cutoff = 0;

  DensityOperator<Scalar> apply(const DensityOperator<Scalar>& rho) const {
    detail::check_one_mode(rho, cutoff);
    const auto wn = detail::no_click_weight(det.eta);
    const auto wc = detail::click_weight(det.eta);
    const int silent = timeout ? step : step - 1;
    ComplexMatrix<Scalar> m = rho.matrix;
    for (int i = 0; i < silent; ++i) {
      m = detail::apply_tap_weighted(m, t, wn);
    }
    if (!timeout) {
      m = detail::apply_tap_weighted(m, t, wc);
    }
    return {std::move(m), cutoff, 1};
  }
};

template <typename Scalar = double>
struct ArmSuperoperators {
  std::vector<ArmBranch<Scalar>> branches;  // click at attempt 1 .. N
  ArmBranch<Scalar> timeout;
};

// The N + 1 conditional branches of one arm's loop. Branch traces sum to
// one on any normalized input.
template <typename Scalar = double>
ArmSuperoperators<Scalar> arm_superoperators(Scalar t,
                                             const DetectorModel<Scalar>& det,
                                             int steps, Eigen::Index cutoff) {
  if (steps < 1) {
    throw std::invalid_argument("arm_superoperators needs at least one step");
  }
  detail::check_transmissivity(t);
  detail::check_cutoff(cutoff);
  ArmSuperoperators<Scalar> arm;
  arm.branches.reserve(static_cast<size_t>(steps));
  for (int n = 1; n <= steps; ++n) {
    arm.branches.push_back({t, det, n, false, cutoff});
  }
  arm.timeout = {t, det, steps, true, cutoff};
  return arm;
}

namespace detail {

// Sum over all click branches of one arm, applied to the chosen mode of a
// two-mode state: accumulate click(noclick^(n-1)(rho)) for n = 1 .. N.
template <typename Scalar>
ComplexMatrix<Scalar> arm_click_sum(const ComplexMatrix<Scalar>& rho,
                                    Eigen::Index cutoff, Scalar t, Scalar eta,
                                    int steps, int mode) {
  const auto wn = no_click_weight(eta);
  const auto wc = click_weight(eta);
  ComplexMatrix<Scalar> sigma = rho;
  ComplexMatrix<Scalar> accum =
      ComplexMatrix<Scalar>::Zero(rho.rows(), rho.cols());
  for (int n = 0; n < steps; ++n) {
    accum += apply_tap_weighted_mode(sigma, cutoff, t, wc, mode);
    if (n + 1 < steps) {
      sigma = apply_tap_weighted_mode(sigma, cutoff, t, wn, mode);
    }
  }
  return accum;
}

}  // namespace detail

// Two-sided adaptive subtraction with per-arm step budgets. Success means
// both detectors clicked; the heralded state averages over every pair of
// click attempts.
template <typename Scalar>
DistillationResult<Scalar> distill(const DensityOperator<Scalar>& rho2,
                                   Scalar t, const DetectorModel<Scalar>& det,
                                   int steps_a, int steps_b) {
  if (rho2.modes != 2) {
    throw std::invalid_argument("distill expects a two-mode state");
  }
  if (steps_a < 1 || steps_b < 1) {
    throw std::invalid_argument("distill needs at least one step per arm");
  }
  detail::check_transmissivity(t);

  DistillationResult<Scalar> result;
  result.steps_a = steps_a;
  result.steps_b = steps_b;
  result.log_negativity_in =
      gaussian_log_negativity(covariance_matrix(rho2));

  const ComplexMatrix<Scalar> after_a =
      detail::arm_click_sum(rho2.matrix, rho2.cutoff, t, det.eta, steps_a, 0);
  const ComplexMatrix<Scalar> after_ab =
      detail::arm_click_sum(after_a, rho2.cutoff, t, det.eta, steps_b, 1);

  result.p_success = after_ab.trace().real();
  if (result.p_success >= Scalar(kDegenerateSuccess)) {
    DensityOperator<Scalar> out;
    out.matrix = after_ab / result.p_success;
    out.cutoff = rho2.cutoff;
    out.modes = 2;
    result.log_negativity_out =
        gaussian_log_negativity(covariance_matrix(out));
    result.rho_out = std::move(out);
  }
  return result;
}

template <typename Scalar>
DistillationResult<Scalar> distill(const DensityOperator<Scalar>& rho2,
                                   Scalar t, const DetectorModel<Scalar>& det,
                                   int steps) {
  return distill(rho2, t, det, steps, steps);
}

template <typename Scalar = double>
struct FrontierPoint {
  Scalar t = Scalar(0);
  Scalar p_success = Scalar(0);
  Scalar log_negativity = Scalar(0);
};

// Success probability versus output negativity along a grid of tap
// transmissivities, sorted by t.
template <typename Scalar>
std::vector<FrontierPoint<Scalar>> frontier(const DensityOperator<Scalar>& rho2,
                                            const DetectorModel<Scalar>& det,
                                            int steps,
                                            std::vector<Scalar> t_grid) {
  std::sort(t_grid.begin(), t_grid.end());
  std::vector<FrontierPoint<Scalar>> points;
  points.reserve(t_grid.size());
  for (Scalar t : t_grid) {
    const DistillationResult<Scalar> r = distill(rho2, t, det, steps);
    points.push_back({t, r.p_success, r.log_negativity_out});
  }
  return points;
}

}  // namespace photonloop
