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

#ifndef PCTL_TYPES_HPP_
#define PCTL_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pctl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Load-time tolerance for "this row is a probability distribution" checks.
inline constexpr double kRowSumTol = 1e-12;

// ---------------------------------------------------------------------------
// Errors.  The CLI maps these onto exit codes: validation/capacity -> 2,
// numeric/degenerate -> 3.  InternalError signals a violated invariant of the
// library itself (a bug), never bad user input.
// ---------------------------------------------------------------------------

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problem size beyond a hard cap (trajectory enumeration, exhaustive policy
// search).  A configuration refusal, not a numeric breakdown.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runtime numeric breakdown: an undefined policy row, indefinite curvature,
// a divergent risk recursion.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A normalizer collapsed to zero where a distribution was required.
class DegenerateError : public NumericError {
 public:
  using NumericError::NumericError;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void check_distribution_row(const double* row, int n, double tol,
                                   const std::string& what) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = row[i];
    if (!(v >= 0.0)) {  // catches negatives and NaN
      throw ValidationError(what + ": entry " + std::to_string(i) +
                            " is negative or NaN");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError(what + ": row sums to " + std::to_string(sum) +
                          ", expected 1");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Finite-horizon controlled Markov chain.  States x in {0..num_states-1},
// actions u in {0..num_actions-1}, decision steps t in {0..horizon-1}.
// transitions[t] is a row-major [x][u][x'] table of tau_t(x' | x, u).
// ---------------------------------------------------------------------------
struct DiscreteProblem {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> initial;                   // |X|
  std::vector<std::vector<double>> transitions;  // horizon tables, |X||U||X'|

  double transition(int t, int x, int u, int y) const {
    return transitions[static_cast<std::size_t>(t)]
                      [(static_cast<std::size_t>(x) * num_actions + u) *
                           num_states +
                       y];
  }

  // Pointer to the contiguous tau_t(. | x, u) row.
  const double* transition_row(int t, int x, int u) const {
    return transitions[static_cast<std::size_t>(t)].data() +
           (static_cast<std::size_t>(x) * num_actions + u) * num_states;
  }

  void validate() const {
    if (num_states <= 0 || num_actions <= 0 || horizon <= 0) {
      throw ValidationError("problem: num_states, num_actions and horizon must be positive");
    }
    if (static_cast<int>(initial.size()) != num_states) {
      throw ValidationError("problem: initial distribution has wrong length");
    }
    detail::check_distribution_row(initial.data(), num_states, kRowSumTol,
                                   "initial distribution");
    if (static_cast<int>(transitions.size()) != horizon) {
      throw ValidationError("problem: expected one transition table per step");
    }
    const std::size_t table_size = static_cast<std::size_t>(num_states) *
                                   num_actions * num_states;
    for (int t = 0; t < horizon; ++t) {
      if (transitions[static_cast<std::size_t>(t)].size() != table_size) {
        throw ValidationError("problem: transition table at step " +
                              std::to_string(t) + " has wrong size");
      }
      for (int x = 0; x < num_states; ++x) {
        for (int u = 0; u < num_actions; ++u) {
          detail::check_distribution_row(
              transition_row(t, x, u), num_states, kRowSumTol,
              "transition row (t=" + std::to_string(t) +
                  ", x=" + std::to_string(x) + ", u=" + std::to_string(u) + ")");
        }
      }
    }
  }

  // Upper bound on the trajectory support size, |X| * (|U||X|)^horizon,
  // evaluated in floating point so huge horizons saturate instead of
  // overflowing.
  double support_bound() const {
    return num_states *
           std::pow(static_cast<double>(num_actions) * num_states, horizon);
  }
};

// ---------------------------------------------------------------------------
// Additive path cost: stage[t] is a row-major [x][u] table, terminal has one
// entry per state.  +inf marks a forbidden configuration (its tilted weight
// exp(-cost) is exactly zero).  The risk parameter sigma is folded into the
// tables once, on construction, and kept only as metadata.
// ---------------------------------------------------------------------------
struct CostModel {
  int num_actions = 0;                     // row width of the stage tables
  std::vector<std::vector<double>> stage;  // horizon tables, |X||U|
  std::vector<double> terminal;            // |X|
  double sigma = 1.0;

  static CostModel scaled(int num_actions,
                          std::vector<std::vector<double>> stage_costs,
                          std::vector<double> terminal_costs, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw ValidationError("cost: sigma must be a positive finite number");
    }
    CostModel cost;
    cost.num_actions = num_actions;
    cost.sigma = sigma;
    cost.stage = std::move(stage_costs);
    cost.terminal = std::move(terminal_costs);
    for (auto& table : cost.stage) {
      for (double& v : table) v *= sigma;
    }
    for (double& v : cost.terminal) v *= sigma;
    return cost;
  }

  double stage_cost(int t, int x, int u) const {
    return stage[static_cast<std::size_t>(t)]
                [static_cast<std::size_t>(x) * num_actions + u];
  }

  const double* stage_row(int t, int x) const {
    return stage[static_cast<std::size_t>(t)].data() +
           static_cast<std::size_t>(x) * num_actions;
  }

  double terminal_cost(int x) const {
    return terminal[static_cast<std::size_t>(x)];
  }

  void validate(const DiscreteProblem& problem) const {
    if (num_actions != problem.num_actions) {
      throw ValidationError("cost: action dimension does not match problem");
    }
    if (static_cast<int>(stage.size()) != problem.horizon) {
      throw ValidationError("cost: expected one stage table per step");
    }
    const std::size_t table_size =
        static_cast<std::size_t>(problem.num_states) * problem.num_actions;
    for (int t = 0; t < problem.horizon; ++t) {
      if (stage[static_cast<std::size_t>(t)].size() != table_size) {
        throw ValidationError("cost: stage table at step " + std::to_string(t) +
                              " has wrong size");
      }
      for (double v : stage[static_cast<std::size_t>(t)]) {
        if (std::isnan(v)) throw ValidationError("cost: stage cost is NaN");
      }
    }
    if (static_cast<int>(terminal.size()) != problem.num_states) {
      throw ValidationError("cost: terminal table has wrong length");
    }
    for (double v : terminal) {
      if (std::isnan(v)) throw ValidationError("cost: terminal cost is NaN");
    }
  }
};

// ---------------------------------------------------------------------------
// Time-varying tabular policy pi_t(u | x): one row-major [x][u] table per
// decision step.  Rows are probability distributions.
// ---------------------------------------------------------------------------
struct TabularPolicy {
  int num_states = 0;
  int num_actions = 0;
  std::vector<std::vector<double>> table;  // horizon tables, |X||U|

  int horizon() const { return static_cast<int>(table.size()); }

  double prob(int t, int x, int u) const {
    return table[static_cast<std::size_t>(t)]
                [static_cast<std::size_t>(x) * num_actions + u];
  }

  double& prob(int t, int x, int u) {
    return table[static_cast<std::size_t>(t)]
                [static_cast<std::size_t>(x) * num_actions + u];
  }

  const double* row(int t, int x) const {
    return table[static_cast<std::size_t>(t)].data() +
           static_cast<std::size_t>(x) * num_actions;
  }

  static TabularPolicy uniform(const DiscreteProblem& problem) {
    TabularPolicy policy;
    policy.num_states = problem.num_states;
    policy.num_actions = problem.num_actions;
    policy.table.assign(
        static_cast<std::size_t>(problem.horizon),
        std::vector<double>(
            static_cast<std::size_t>(problem.num_states) * problem.num_actions,
            1.0 / problem.num_actions));
    return policy;
  }

  // Point mass on a per-(t, x) action map.
  static TabularPolicy point_mass(const DiscreteProblem& problem,
                                  const std::vector<std::vector<int>>& action) {
    TabularPolicy policy;
    policy.num_states = problem.num_states;
    policy.num_actions = problem.num_actions;
    policy.table.assign(
        static_cast<std::size_t>(problem.horizon),
        std::vector<double>(
            static_cast<std::size_t>(problem.num_states) * problem.num_actions,
            0.0));
    for (int t = 0; t < problem.horizon; ++t) {
      for (int x = 0; x < problem.num_states; ++x) {
        policy.prob(t, x, action[static_cast<std::size_t>(t)]
                                [static_cast<std::size_t>(x)]) = 1.0;
      }
    }
    return policy;
  }

  void validate(const DiscreteProblem& problem) const {
    if (num_states != problem.num_states || num_actions != problem.num_actions) {
      throw ValidationError("policy: state/action dimensions do not match problem");
    }
    if (horizon() != problem.horizon) {
      throw ValidationError("policy: expected one table per decision step");
    }
    for (int t = 0; t < problem.horizon; ++t) {
      for (int x = 0; x < num_states; ++x) {
        detail::check_distribution_row(
            row(t, x), num_actions, kRowSumTol,
            "policy row (t=" + std::to_string(t) + ", x=" + std::to_string(x) +
                ")");
      }
    }
  }
};

// Sup-norm distance between two policies over the same index set.
inline double sup_distance(const TabularPolicy& a, const TabularPolicy& b) {
  if (a.table.size() != b.table.size()) {
    throw ValidationError("sup_distance: policies have different horizons");
  }
  double d = 0.0;
  for (std::size_t t = 0; t < a.table.size(); ++t) {
    if (a.table[t].size() != b.table[t].size()) {
      throw ValidationError("sup_distance: policies have different table sizes");
    }
    for (std::size_t i = 0; i < a.table[t].size(); ++i) {
      d = std::max(d, std::abs(a.table[t][i] - b.table[t][i]));
    }
  }
  return d;
}

// Per-(t, x) argmax action map; ties resolve to the lowest action index.
inline std::vector<std::vector<int>> argmax_map(const TabularPolicy& policy) {
  std::vector<std::vector<int>> result(policy.table.size());
  for (std::size_t t = 0; t < policy.table.size(); ++t) {
    result[t].resize(static_cast<std::size_t>(policy.num_states));
    for (int x = 0; x < policy.num_states; ++x) {
      const double* row = policy.row(static_cast<int>(t), x);
      int best = 0;
      for (int u = 1; u < policy.num_actions; ++u) {
        if (row[u] > row[best]) best = u;  // strict: first max wins ties
      }
      result[t][static_cast<std::size_t>(x)] = best;
    }
  }
  return result;
}

}  // namespace pctl

#endif  // PCTL_TYPES_HPP_
