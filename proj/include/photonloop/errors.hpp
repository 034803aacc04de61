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

#include <stdexcept>
#include <string>

namespace photonloop {

// Thrown when a state does not fit in the requested Fock cutoff. Carries the
// population found in the top two Fock levels so callers can report how far
// off the cutoff is.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, double tail_mass)
      : std::runtime_error(what), tail_mass_(tail_mass) {}

  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

// Non-finite intermediates, unphysical covariance data, failed decompositions.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root bracketing failed (for example the scanned quantity was not monotone).
class bracketing_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested target value lies outside what the protocol can reach.
class unreachable_target_error : public std::runtime_error {
 public:
  unreachable_target_error(const std::string& what, double achievable_max)
      : std::runtime_error(what), achievable_max_(achievable_max) {}

  double achievable_max() const noexcept { return achievable_max_; }

 private:
  double achievable_max_;
};

}  // namespace photonloop
