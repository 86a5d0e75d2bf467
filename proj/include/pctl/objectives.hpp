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

#ifndef PCTL_OBJECTIVES_HPP_
#define PCTL_OBJECTIVES_HPP_

#include <cmath>
#include <span>
#include <vector>

#include "pctl/numeric.hpp"
#include "pctl/trajectory.hpp"
#include "pctl/types.hpp"

namespace pctl {

// The two control objectives of a policy:
//   soc  (A) = E[cost],                    the standard expected cost;
//   rsoc (B) = -log E[exp(-cost)],         its risk-seeking relaxation.
// Jensen gives B <= A, with equality only for a deterministic cost.
struct Objectives {
  double soc = 0.0;
  double rsoc = 0.0;
};

// Exact objectives by trajectory enumeration.  Propagates the enumeration
// capacity error on oversized problems; the *_recursive forms below evaluate
// the same quantities in O(T |X| |U|) and work at any size.
inline Objectives objectives(const DiscreteProblem& problem,
                             const TabularPolicy& policy,
                             const CostModel& cost,
                             std::size_t cap = kDefaultEnumerationCap) {
  const TrajectoryDistribution dist =
      enumerate_trajectories(problem, policy, cost, cap);
  Objectives result;
  result.soc = weighted_sum(std::span<const double>(dist.probability),
                            std::span<const double>(dist.cost));
  result.rsoc = soft_min(std::span<const double>(dist.probability),
                         std::span<const double>(dist.cost));
  return result;
}

// Policy evaluation for the expected cost: W_T = r_T and
//   W_t(x) = sum_u pi_t(u|x) [ r_t(x,u) + sum_y tau_t(y|x,u) W_{t+1}(y) ],
// A = sum_x p_0(x) W_0(x).  Zero-probability branches never contribute, even
// against an infinite cost.
inline double soc_objective_recursive(const DiscreteProblem& problem,
                                      const TabularPolicy& policy,
                                      const CostModel& cost) {
  std::vector<double> next(cost.terminal);
  std::vector<double> current(static_cast<std::size_t>(problem.num_states));
  std::vector<double> per_action(static_cast<std::size_t>(problem.num_actions));
  for (int t = problem.horizon - 1; t >= 0; --t) {
    for (int x = 0; x < problem.num_states; ++x) {
      for (int u = 0; u < problem.num_actions; ++u) {
        per_action[static_cast<std::size_t>(u)] =
            cost.stage_cost(t, x, u) +
            weighted_sum(
                std::span<const double>(
                    problem.transition_row(t, x, u),
                    static_cast<std::size_t>(problem.num_states)),
                std::span<const double>(next));
      }
      current[static_cast<std::size_t>(x)] = weighted_sum(
          std::span<const double>(policy.row(t, x),
                                  static_cast<std::size_t>(problem.num_actions)),
          std::span<const double>(per_action));
    }
    next = current;
  }
  return weighted_sum(std::span<const double>(problem.initial),
                      std::span<const double>(next));
}

// Log-partition recursion for the risk objective, entirely in the log
// domain:  G_T = r_T,
//   G_t(x) = -log sum_u pi_t(u|x) exp(-[ r_t(x,u) - log sum_y tau e^{-G} ]),
// B = -log sum_x p_0(x) exp(-G_0(x)).
inline double rsoc_objective_recursive(const DiscreteProblem& problem,
                                       const TabularPolicy& policy,
                                       const CostModel& cost) {
  std::vector<double> next(cost.terminal);
  std::vector<double> current(static_cast<std::size_t>(problem.num_states));
  std::vector<double> per_action(static_cast<std::size_t>(problem.num_actions));
  for (int t = problem.horizon - 1; t >= 0; --t) {
    for (int x = 0; x < problem.num_states; ++x) {
      for (int u = 0; u < problem.num_actions; ++u) {
        per_action[static_cast<std::size_t>(u)] =
            cost.stage_cost(t, x, u) +
            soft_min(std::span<const double>(
                         problem.transition_row(t, x, u),
                         static_cast<std::size_t>(problem.num_states)),
                     std::span<const double>(next));
      }
      current[static_cast<std::size_t>(x)] = soft_min(
          std::span<const double>(policy.row(t, x),
                                  static_cast<std::size_t>(problem.num_actions)),
          std::span<const double>(per_action));
    }
    next = current;
  }
  return soft_min(std::span<const double>(problem.initial),
                  std::span<const double>(next));
}

}  // namespace pctl

#endif  // PCTL_OBJECTIVES_HPP_
