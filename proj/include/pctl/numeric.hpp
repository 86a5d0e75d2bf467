// Copyright 2026 The pctl Authors
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

#ifndef PCTL_NUMERIC_HPP_
#define PCTL_NUMERIC_HPP_

#include <cmath>
#include <span>

#include "pctl/types.hpp"

namespace pctl {

// -log sum_i w_i exp(-v_i), the soft minimum of v under nonnegative weights
// w.  Evaluated with the classic max-shift (here: shift by the smallest v
// carrying positive weight) so that large costs never underflow the sum to
// zero.  Zero-weight entries are skipped, which makes w_i = 0, v_i = +inf a
// well-defined "branch that cannot happen".  Returns +inf when every
// positively weighted v is +inf or no weight is positive.
inline double soft_min(std::span<const double> w, std::span<const double> v) {
  double shift = kInf;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] > 0.0 && v[i] < shift) shift = v[i];
  }
  if (shift == kInf) return kInf;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] > 0.0) sum += w[i] * std::exp(shift - v[i]);
  }
  return shift - std::log(sum);
}

// The alpha-divergence interpolation of soft_min:
//   -(1/alpha) log sum_i w_i exp(-alpha v_i),
// shifted the same way.  alpha = 1 recovers soft_min; alpha -> 0 tends to
// the plain expectation.
inline double soft_min_alpha(std::span<const double> w,
                             std::span<const double> v, double alpha) {
  double shift = kInf;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] > 0.0 && v[i] < shift) shift = v[i];
  }
  if (shift == kInf) return kInf;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] > 0.0) sum += w[i] * std::exp(alpha * (shift - v[i]));
  }
  return shift - std::log(sum) / alpha;
}

// sum_i w_i v_i with the convention 0 * inf = 0 (zero-weight branches do not
// exist, whatever their cost).
inline double weighted_sum(std::span<const double> w,
                           std::span<const double> v) {
  double sum = 0.0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] > 0.0) sum += w[i] * v[i];
  }
  return sum;
}

}  // namespace pctl

#endif  // PCTL_NUMERIC_HPP_
