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

#ifndef PCTL_PROJECTION_HPP_
#define PCTL_PROJECTION_HPP_

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pctl/numeric.hpp"
#include "pctl/types.hpp"

namespace pctl {

// Which divergence the backward pass minimizes against the tilted target
// distribution.  The three variants differ only in how the next-step value
// is averaged over the transition kernel:
//   I     : plain expectation          E_tau[V]
//   M     : soft minimum               -log E_tau[exp(-V)]
//   Renyi : alpha interpolation        -(1/alpha) log E_tau[exp(-alpha V)]
// with alpha restricted to the open interval (0, 1).  The alpha -> 0 / 1
// endpoints coincide with I / M and are served by those explicit branches,
// not by pushing alpha against the boundary.
struct ProjectionKind {
  enum class Family { kI, kM, kRenyi };

  Family family = Family::kI;
  double alpha = 0.0;  // only meaningful for kRenyi

  static ProjectionKind I() { return {Family::kI, 0.0}; }
  static ProjectionKind M() { return {Family::kM, 1.0}; }
  static ProjectionKind Renyi(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
      throw ValidationError(
          "projection: Renyi alpha must lie strictly inside (0, 1); the "
          "endpoints are the I (alpha -> 0) and M (alpha -> 1) projections");
    }
    return {Family::kRenyi, alpha};
  }

  const char* name() const {
    switch (family) {
      case Family::kI: return "i";
      case Family::kM: return "m";
      case Family::kRenyi: return "renyi";
    }
    return "?";
  }
};

// Backward-pass output: q[t] is a row-major [x][u] table of state-action
// values, v has horizon + 1 rows of state values (v[horizon] = terminal
// cost).  All definitions share
//   Q_t(x, u) = r_t(x, u) + Phi(tau_t(.|x, u), V_{t+1}),
//   V_t(x)    = -log sum_u prior_t(u|x) exp(-Q_t(x, u)),
// with Phi the averaging of the chosen projection family.
struct ValueTables {
  ProjectionKind kind;
  std::vector<std::vector<double>> q;  // horizon tables, |X||U|
  std::vector<std::vector<double>> v;  // horizon + 1 rows, |X|
};

struct ProjectionResult {
  ValueTables values;
  TabularPolicy policy;
};

namespace detail {

// pi_t(u|x) = prior_t(u|x) exp(V_t(x) - Q_t(x, u)), then an exact row
// normalization to remove the O(eps) drift of the exponentials.
inline void policy_row_from_q_v(const double* prior_row, const double* q_row,
                                double v, int num_actions, double* out,
                                int t, int x) {
  if (!std::isfinite(v)) {
    throw NumericError("policy undefined at (t=" + std::to_string(t) +
                       ", x=" + std::to_string(x) +
                       "): every action with positive prior probability has "
                       "infinite value");
  }
  double sum = 0.0;
  for (int u = 0; u < num_actions; ++u) {
    out[u] = prior_row[u] * std::exp(v - q_row[u]);
    sum += out[u];
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw NumericError("policy row at (t=" + std::to_string(t) +
                       ", x=" + std::to_string(x) +
                       ") is not normalizable (sum " + std::to_string(sum) +
                       ")");
  }
  for (int u = 0; u < num_actions; ++u) out[u] /= sum;
}

}  // namespace detail

// One backward sweep of the projection recursion against the tilted target
// built from `prior` and `cost`.  Returns both the value tables and the
// projected policy.  Runs in O(horizon |X|^2 |U|) regardless of the
// trajectory support size.
inline ProjectionResult backward_pass(const DiscreteProblem& problem,
                                      const CostModel& cost,
                                      const TabularPolicy& prior,
                                      ProjectionKind kind) {
  ProjectionResult result;
  result.values.kind = kind;
  result.values.q.assign(
      static_cast<std::size_t>(problem.horizon),
      std::vector<double>(
          static_cast<std::size_t>(problem.num_states) * problem.num_actions,
          0.0));
  result.values.v.assign(static_cast<std::size_t>(problem.horizon) + 1, {});
  result.values.v[static_cast<std::size_t>(problem.horizon)] = cost.terminal;

  result.policy.num_states = problem.num_states;
  result.policy.num_actions = problem.num_actions;
  result.policy.table.assign(
      static_cast<std::size_t>(problem.horizon),
      std::vector<double>(
          static_cast<std::size_t>(problem.num_states) * problem.num_actions,
          0.0));

  for (int t = problem.horizon - 1; t >= 0; --t) {
    const std::vector<double>& next =
        result.values.v[static_cast<std::size_t>(t) + 1];
    std::vector<double>& q = result.values.q[static_cast<std::size_t>(t)];
    std::vector<double>& v = result.values.v[static_cast<std::size_t>(t)];
    v.resize(static_cast<std::size_t>(problem.num_states));
    for (int x = 0; x < problem.num_states; ++x) {
      double* q_row = q.data() + static_cast<std::size_t>(x) * problem.num_actions;
      for (int u = 0; u < problem.num_actions; ++u) {
        const std::span<const double> tau(
            problem.transition_row(t, x, u),
            static_cast<std::size_t>(problem.num_states));
        const std::span<const double> values(next);
        double phi = 0.0;
        switch (kind.family) {
          case ProjectionKind::Family::kI:
            phi = weighted_sum(tau, values);
            break;
          case ProjectionKind::Family::kM:
            phi = soft_min(tau, values);
            break;
          case ProjectionKind::Family::kRenyi:
            phi = soft_min_alpha(tau, values, kind.alpha);
            break;
        }
        q_row[u] = cost.stage_cost(t, x, u) + phi;
      }
      v[static_cast<std::size_t>(x)] = soft_min(
          std::span<const double>(prior.row(t, x),
                                  static_cast<std::size_t>(problem.num_actions)),
          std::span<const double>(q_row,
                                  static_cast<std::size_t>(problem.num_actions)));
      detail::policy_row_from_q_v(
          prior.row(t, x), q_row, v[static_cast<std::size_t>(x)],
          problem.num_actions,
          result.policy.table[static_cast<std::size_t>(t)].data() +
              static_cast<std::size_t>(x) * problem.num_actions,
          t, x);
    }
  }
  return result;
}

// Rebuilds the projected policy from previously computed value tables.
inline TabularPolicy policy_from_values(const TabularPolicy& prior,
                                        const ValueTables& values) {
  TabularPolicy policy;
  policy.num_states = prior.num_states;
  policy.num_actions = prior.num_actions;
  const int horizon = static_cast<int>(values.q.size());
  if (prior.horizon() != horizon) {
    throw ValidationError(
        "policy_from_values: prior horizon does not match value tables");
  }
  policy.table.assign(
      static_cast<std::size_t>(horizon),
      std::vector<double>(
          static_cast<std::size_t>(prior.num_states) * prior.num_actions, 0.0));
  for (int t = 0; t < horizon; ++t) {
    if (values.q[static_cast<std::size_t>(t)].size() !=
            static_cast<std::size_t>(prior.num_states) * prior.num_actions ||
        static_cast<int>(values.v[static_cast<std::size_t>(t)].size()) !=
            prior.num_states) {
      throw ValidationError("policy_from_values: value tables have wrong shape");
    }
    for (int x = 0; x < prior.num_states; ++x) {
      detail::policy_row_from_q_v(
          prior.row(t, x),
          values.q[static_cast<std::size_t>(t)].data() +
              static_cast<std::size_t>(x) * prior.num_actions,
          values.v[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)],
          prior.num_actions,
          policy.table[static_cast<std::size_t>(t)].data() +
              static_cast<std::size_t>(x) * prior.num_actions,
          t, x);
    }
  }
  return policy;
}

}  // namespace pctl

#endif  // PCTL_PROJECTION_HPP_
