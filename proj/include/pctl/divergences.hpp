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

#ifndef PCTL_DIVERGENCES_HPP_
#define PCTL_DIVERGENCES_HPP_

#include <cmath>
#include <span>

#include "pctl/trajectory.hpp"
#include "pctl/types.hpp"

namespace pctl {

// Kullback-Leibler divergence sum_i p_i log(p_i / q_i) between two
// distributions given entry-aligned over the same support.  Entries with
// p_i = 0 contribute nothing; an entry with p_i > 0, q_i = 0 makes the
// divergence +inf (returned as a value, not thrown: disjoint supports are a
// legitimate answer, not a failure).
inline double kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ValidationError("kl: distributions have different support sizes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

// Renyi divergence of order alpha in (0, 1), under the scaling
//   D_alpha(p, q) = 1 / (alpha (alpha - 1)) * log sum_i p_i^alpha q_i^(1-alpha).
// The alpha -> 1 limit is kl(p, q) and the alpha -> 0 limit is kl(q, p);
// both endpoints are excluded here — callers wanting them should call kl
// directly rather than push alpha against the boundary.
inline double renyi(std::span<const double> p, std::span<const double> q,
                    double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ValidationError(
        "renyi: alpha must lie strictly inside (0, 1); the limits alpha -> 1 "
        "and alpha -> 0 are kl(p, q) and kl(q, p) — use kl for those");
  }
  if (p.size() != q.size()) {
    throw ValidationError("renyi: distributions have different support sizes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0 || q[i] <= 0.0) continue;  // either factor kills the term
    sum += std::exp(alpha * std::log(p[i]) + (1.0 - alpha) * std::log(q[i]));
  }
  // sum = 0 means the supports are disjoint; log(0) = -inf and the negative
  // prefactor turns it into +inf, which is the right answer.
  return std::log(sum) / (alpha * (alpha - 1.0));
}

// Convenience overloads on enumerated distributions.  Supports must align
// entry by entry (same problem, same enumeration), which is checked.

namespace detail {
inline void check_aligned(const TrajectoryDistribution& a,
                          const TrajectoryDistribution& b,
                          const char* what) {
  if (!support_equal(a, b)) {
    throw ValidationError(std::string(what) +
                          ": trajectory supports are not aligned");
  }
}
}  // namespace detail

inline double kl(const TrajectoryDistribution& p,
                 const TrajectoryDistribution& q) {
  detail::check_aligned(p, q, "kl");
  return kl(std::span<const double>(p.probability),
            std::span<const double>(q.probability));
}

inline double kl(const TrajectoryDistribution& p,
                 const DesiredDistribution& q) {
  detail::check_aligned(p, q.base, "kl");
  return kl(std::span<const double>(p.probability),
            std::span<const double>(q.weight));
}

inline double kl(const DesiredDistribution& p,
                 const TrajectoryDistribution& q) {
  detail::check_aligned(p.base, q, "kl");
  return kl(std::span<const double>(p.weight),
            std::span<const double>(q.probability));
}

inline double kl(const DesiredDistribution& p, const DesiredDistribution& q) {
  detail::check_aligned(p.base, q.base, "kl");
  return kl(std::span<const double>(p.weight),
            std::span<const double>(q.weight));
}

inline double renyi(const TrajectoryDistribution& p,
                    const TrajectoryDistribution& q, double alpha) {
  detail::check_aligned(p, q, "renyi");
  return renyi(std::span<const double>(p.probability),
               std::span<const double>(q.probability), alpha);
}

inline double renyi(const TrajectoryDistribution& p,
                    const DesiredDistribution& q, double alpha) {
  detail::check_aligned(p, q.base, "renyi");
  return renyi(std::span<const double>(p.probability),
               std::span<const double>(q.weight), alpha);
}

}  // namespace pctl

#endif  // PCTL_DIVERGENCES_HPP_
