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

#ifndef PCTL_ORACLE_HPP_
#define PCTL_ORACLE_HPP_

// Ground-truth solvers used to cross-check the projection/MM machinery.
// Everything here is written against the plain data types only and
// deliberately does NOT reuse the solver-side recursions or numeric
// helpers: a bug in those must not be able to hide inside its own oracle.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pctl/objectives.hpp"
#include "pctl/types.hpp"

namespace pctl {
namespace oracle {

namespace detail {

// Independent max-shifted -log sum_i w_i exp(-v_i); skips w_i = 0.
inline double neg_log_sum_exp_neg(const double* w, const double* v, int n) {
  double lo = kInf;
  for (int i = 0; i < n; ++i) {
    if (w[i] > 0.0 && v[i] < lo) lo = v[i];
  }
  if (lo == kInf) return kInf;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    if (w[i] > 0.0) acc += w[i] * std::exp(lo - v[i]);
  }
  return lo - std::log(acc);
}

inline double dot_skip_zero(const double* w, const double* v, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    if (w[i] > 0.0) acc += w[i] * v[i];
  }
  return acc;
}

}  // namespace detail

// Result of a dynamic program: per-(t, x) optimal values (horizon + 1 rows,
// the last one the terminal cost), the per-(t, x) argmin action (ties go to
// the lowest action index), and the optimal objective from the initial
// distribution.
struct DpSolution {
  std::vector<std::vector<double>> value;
  std::vector<std::vector<int>> action;
  double objective = 0.0;
};

// Expected-cost dynamic program:
//   V_t(x) = min_u [ r_t(x, u) + sum_y tau_t(y|x, u) V_{t+1}(y) ].
inline DpSolution dp_soc(const DiscreteProblem& problem,
                         const CostModel& cost) {
  DpSolution sol;
  sol.value.assign(static_cast<std::size_t>(problem.horizon) + 1, {});
  sol.action.assign(static_cast<std::size_t>(problem.horizon), {});
  sol.value[static_cast<std::size_t>(problem.horizon)] = cost.terminal;
  for (int t = problem.horizon - 1; t >= 0; --t) {
    const std::vector<double>& next = sol.value[static_cast<std::size_t>(t) + 1];
    std::vector<double>& value = sol.value[static_cast<std::size_t>(t)];
    std::vector<int>& action = sol.action[static_cast<std::size_t>(t)];
    value.resize(static_cast<std::size_t>(problem.num_states));
    action.resize(static_cast<std::size_t>(problem.num_states));
    for (int x = 0; x < problem.num_states; ++x) {
      double best = kInf;
      int best_u = 0;
      for (int u = 0; u < problem.num_actions; ++u) {
        const double q =
            cost.stage_cost(t, x, u) +
            detail::dot_skip_zero(problem.transition_row(t, x, u), next.data(),
                                  problem.num_states);
        if (q < best) {
          best = q;
          best_u = u;
        }
      }
      value[static_cast<std::size_t>(x)] = best;
      action[static_cast<std::size_t>(x)] = best_u;
    }
  }
  sol.objective = detail::dot_skip_zero(problem.initial.data(),
                                        sol.value[0].data(), problem.num_states);
  return sol;
}

// Risk-seeking dynamic program:
//   V_t(x) = min_u [ r_t(x, u) - log sum_y tau_t(y|x, u) exp(-V_{t+1}(y)) ],
// objective -log sum_x p_0(x) exp(-V_0(x)).
inline DpSolution dp_rsoc(const DiscreteProblem& problem,
                          const CostModel& cost) {
  DpSolution sol;
  sol.value.assign(static_cast<std::size_t>(problem.horizon) + 1, {});
  sol.action.assign(static_cast<std::size_t>(problem.horizon), {});
  sol.value[static_cast<std::size_t>(problem.horizon)] = cost.terminal;
  for (int t = problem.horizon - 1; t >= 0; --t) {
    const std::vector<double>& next = sol.value[static_cast<std::size_t>(t) + 1];
    std::vector<double>& value = sol.value[static_cast<std::size_t>(t)];
    std::vector<int>& action = sol.action[static_cast<std::size_t>(t)];
    value.resize(static_cast<std::size_t>(problem.num_states));
    action.resize(static_cast<std::size_t>(problem.num_states));
    for (int x = 0; x < problem.num_states; ++x) {
      double best = kInf;
      int best_u = 0;
      for (int u = 0; u < problem.num_actions; ++u) {
        const double q =
            cost.stage_cost(t, x, u) +
            detail::neg_log_sum_exp_neg(problem.transition_row(t, x, u),
                                        next.data(), problem.num_states);
        if (q < best) {
          best = q;
          best_u = u;
        }
      }
      value[static_cast<std::size_t>(x)] = best;
      action[static_cast<std::size_t>(x)] = best_u;
    }
  }
  sol.objective = detail::neg_log_sum_exp_neg(
      problem.initial.data(), sol.value[0].data(), problem.num_states);
  return sol;
}

// Expected cost of a fixed deterministic policy (no minimization), same
// recursion as dp_soc with the action pinned.
inline double evaluate_deterministic_soc(
    const DiscreteProblem& problem, const CostModel& cost,
    const std::vector<std::vector<int>>& action,
    std::vector<std::vector<double>>* values = nullptr) {
  std::vector<std::vector<double>> table(
      static_cast<std::size_t>(problem.horizon) + 1);
  table[static_cast<std::size_t>(problem.horizon)] = cost.terminal;
  for (int t = problem.horizon - 1; t >= 0; --t) {
    const std::vector<double>& next = table[static_cast<std::size_t>(t) + 1];
    std::vector<double>& value = table[static_cast<std::size_t>(t)];
    value.resize(static_cast<std::size_t>(problem.num_states));
    for (int x = 0; x < problem.num_states; ++x) {
      const int u = action[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
      value[static_cast<std::size_t>(x)] =
          cost.stage_cost(t, x, u) +
          detail::dot_skip_zero(problem.transition_row(t, x, u), next.data(),
                                problem.num_states);
    }
  }
  const double objective = detail::dot_skip_zero(
      problem.initial.data(), table[0].data(), problem.num_states);
  if (values != nullptr) *values = std::move(table);
  return objective;
}

// Risk value of a fixed deterministic policy.
inline double evaluate_deterministic_rsoc(
    const DiscreteProblem& problem, const CostModel& cost,
    const std::vector<std::vector<int>>& action,
    std::vector<std::vector<double>>* values = nullptr) {
  std::vector<std::vector<double>> table(
      static_cast<std::size_t>(problem.horizon) + 1);
  table[static_cast<std::size_t>(problem.horizon)] = cost.terminal;
  for (int t = problem.horizon - 1; t >= 0; --t) {
    const std::vector<double>& next = table[static_cast<std::size_t>(t) + 1];
    std::vector<double>& value = table[static_cast<std::size_t>(t)];
    value.resize(static_cast<std::size_t>(problem.num_states));
    for (int x = 0; x < problem.num_states; ++x) {
      const int u = action[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
      value[static_cast<std::size_t>(x)] =
          cost.stage_cost(t, x, u) +
          detail::neg_log_sum_exp_neg(problem.transition_row(t, x, u),
                                      next.data(), problem.num_states);
    }
  }
  const double objective = detail::neg_log_sum_exp_neg(
      problem.initial.data(), table[0].data(), problem.num_states);
  if (values != nullptr) *values = std::move(table);
  return objective;
}

enum class ObjectiveKind { kSoc, kRsoc };

struct SearchSolution {
  std::vector<std::vector<int>> action;
  double objective = kInf;
};

inline constexpr std::uint64_t kExhaustiveSearchCap = 1'000'000;

// Brute force over all |U|^(|X| * T) deterministic policies, evaluating each
// one exactly by trajectory enumeration.  Policies are visited in
// lexicographic order of their action tuple ((t=0, x=0) most significant),
// and only a strictly better objective replaces the incumbent, so ties
// resolve to the lexicographically lowest policy.  Cost grows as
// (number of policies) x (trajectory support); this is a desk-scale oracle.
inline SearchSolution exhaustive_policy_search(const DiscreteProblem& problem,
                                               const CostModel& cost,
                                               ObjectiveKind kind) {
  std::uint64_t count = 1;
  const std::uint64_t cells =
      static_cast<std::uint64_t>(problem.horizon) * problem.num_states;
  for (std::uint64_t i = 0; i < cells; ++i) {
    count *= static_cast<std::uint64_t>(problem.num_actions);
    if (count > kExhaustiveSearchCap) {
      throw CapacityError(
          "exhaustive policy search: |U|^(|X| horizon) exceeds the cap of " +
          std::to_string(kExhaustiveSearchCap) + " policies");
    }
  }

  std::vector<std::vector<int>> action(
      static_cast<std::size_t>(problem.horizon),
      std::vector<int>(static_cast<std::size_t>(problem.num_states), 0));
  SearchSolution best;
  for (std::uint64_t index = 0; index < count; ++index) {
    const TabularPolicy policy = TabularPolicy::point_mass(problem, action);
    const Objectives value = objectives(problem, policy, cost);
    const double objective =
        (kind == ObjectiveKind::kSoc) ? value.soc : value.rsoc;
    if (objective < best.objective) {
      best.objective = objective;
      best.action = action;
    }
    // Increment the mixed-radix action counter, least significant digit at
    // the last (t, x) cell.
    for (std::size_t cell = static_cast<std::size_t>(cells); cell-- > 0;) {
      int& digit = action[cell / problem.num_states][cell % problem.num_states];
      if (++digit < problem.num_actions) break;
      digit = 0;
    }
  }
  return best;
}

}  // namespace oracle
}  // namespace pctl

#endif  // PCTL_ORACLE_HPP_
