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

#ifndef PCTL_PIC_HPP_
#define PCTL_PIC_HPP_

// Path-integral view of the M-projection: the optimal values are free
// energies -log E[exp(-cost-to-go)] under the *prior* closed loop, so they
// admit plain Monte-Carlo estimation from prior rollouts — no optimization
// in the loop.  This header holds the samplers, the exact
// Bayesian-smoothing construction of the same policy, and the closed-loop
// equivalence check tying both back to the tilted target distribution.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pctl/projection.hpp"
#include "pctl/rng.hpp"
#include "pctl/trajectory.hpp"
#include "pctl/types.hpp"

namespace pctl {

struct McEstimate {
  double value = 0.0;    // -log of the self-normalized weight mean
  double std_err = 0.0;  // delta-method standard error of `value`
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Cost accumulated by one prior rollout from state x at step t through the
// terminal cost.  Each sample owns its stream, so sample i is the same
// whether or not samples 0..i-1 were drawn.
inline double rollout_cost(const DiscreteProblem& problem,
                           const TabularPolicy& prior, const CostModel& cost,
                           int x, int t, SplitMix64& rng) {
  double total = 0.0;
  int state = x;
  for (int s = t; s < problem.horizon; ++s) {
    const int u = categorical(rng, prior.row(s, state), problem.num_actions);
    total += cost.stage_cost(s, state, u);
    state = categorical(rng, problem.transition_row(s, state, u),
                        problem.num_states);
  }
  return total + cost.terminal_cost(state);
}

// Turn per-sample costs into (-log mean exp(-cost), std_err), shifting by
// the smallest cost so the weight of the best sample is exactly 1.
inline McEstimate weight_mean(const std::vector<double>& costs,
                              std::uint64_t seed) {
  McEstimate estimate;
  estimate.samples = costs.size();
  estimate.seed = seed;
  double shift = kInf;
  for (double c : costs) shift = std::min(shift, c);
  if (shift == kInf) {
    // Every sampled path is forbidden; the free energy is genuinely +inf.
    estimate.value = kInf;
    estimate.std_err = kInf;
    return estimate;
  }
  const double n = static_cast<double>(costs.size());
  double mean = 0.0;
  for (double c : costs) mean += std::exp(shift - c);
  mean /= n;
  estimate.value = shift - std::log(mean);
  if (costs.size() > 1) {
    double ss = 0.0;
    for (double c : costs) {
      const double d = std::exp(shift - c) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    estimate.std_err = sd / (mean * std::sqrt(n));
  }
  return estimate;
}

}  // namespace detail

// Monte-Carlo estimate of the optimal risk value V*_t(x) = -log E[exp(-cost
// from (t, x))] under prior rollouts.  Bitwise deterministic in (seed, n):
// sample i always uses sample_stream(seed, i).
inline McEstimate pic_value_mc(const DiscreteProblem& problem,
                               const TabularPolicy& prior,
                               const CostModel& cost, int x, int t,
                               std::uint64_t samples, std::uint64_t seed) {
  if (t < 0 || t > problem.horizon) {
    throw ValidationError("pic: step index out of range");
  }
  if (x < 0 || x >= problem.num_states) {
    throw ValidationError("pic: state index out of range");
  }
  if (samples == 0) {
    throw ValidationError("pic: need at least one sample");
  }
  if (t == problem.horizon) {
    // No randomness left; the value is the terminal cost, exactly.
    return McEstimate{cost.terminal_cost(x), 0.0, samples, seed};
  }
  std::vector<double> costs(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    SplitMix64 rng = sample_stream(seed, i);
    costs[i] = detail::rollout_cost(problem, prior, cost, x, t, rng);
  }
  return detail::weight_mean(costs, seed);
}

// Monte-Carlo construction of the full projected policy
//   pi_t(u|x) ∝ prior_t(u|x) exp(-Q_t(x, u)),
// where exp(-Q_t(x, u)) = exp(-r_t(x, u)) E[exp(-cost from the sampled
// successor)] is estimated cell by cell.  Every (t, x, u, i) tuple gets its
// own stream, so the table is reproducible per cell and in any order.
struct PicPolicyEstimate {
  TabularPolicy policy;
  std::vector<std::vector<double>> q_value;    // per-(t, x, u) estimates
  std::vector<std::vector<double>> q_std_err;  // matching standard errors
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

inline PicPolicyEstimate pic_policy_mc(const DiscreteProblem& problem,
                                       const TabularPolicy& prior,
                                       const CostModel& cost,
                                       std::uint64_t samples,
                                       std::uint64_t seed) {
  if (samples == 0) {
    throw ValidationError("pic: need at least one sample");
  }
  PicPolicyEstimate result;
  result.samples = samples;
  result.seed = seed;
  result.policy.num_states = problem.num_states;
  result.policy.num_actions = problem.num_actions;
  result.policy.table.assign(
      static_cast<std::size_t>(problem.horizon),
      std::vector<double>(
          static_cast<std::size_t>(problem.num_states) * problem.num_actions,
          0.0));
  result.q_value = result.policy.table;
  result.q_std_err = result.policy.table;

  std::vector<double> costs(samples);
  std::vector<double> scores(static_cast<std::size_t>(problem.num_actions));
  for (int t = 0; t < problem.horizon; ++t) {
    for (int x = 0; x < problem.num_states; ++x) {
      for (int u = 0; u < problem.num_actions; ++u) {
        const std::uint64_t cell =
            (static_cast<std::uint64_t>(t) * problem.num_states + x) *
                problem.num_actions +
            u;
        for (std::uint64_t i = 0; i < samples; ++i) {
          SplitMix64 rng = sample_stream(seed, cell * samples + i);
          const int y = categorical(rng, problem.transition_row(t, x, u),
                                    problem.num_states);
          costs[i] = cost.stage_cost(t, x, u) +
                     detail::rollout_cost(problem, prior, cost, y, t + 1, rng);
        }
        const McEstimate estimate = detail::weight_mean(costs, seed);
        result.q_value[static_cast<std::size_t>(t)]
                      [static_cast<std::size_t>(x) * problem.num_actions + u] =
            estimate.value;
        result.q_std_err[static_cast<std::size_t>(t)]
                        [static_cast<std::size_t>(x) * problem.num_actions + u] =
            estimate.std_err;
      }

      // Self-normalized policy row in the log domain.
      const double* prior_row = prior.row(t, x);
      double top = -kInf;
      for (int u = 0; u < problem.num_actions; ++u) {
        const double q =
            result.q_value[static_cast<std::size_t>(t)]
                          [static_cast<std::size_t>(x) * problem.num_actions + u];
        scores[static_cast<std::size_t>(u)] =
            (prior_row[u] > 0.0) ? std::log(prior_row[u]) - q : -kInf;
        top = std::max(top, scores[static_cast<std::size_t>(u)]);
      }
      if (top == -kInf) {
        throw DegenerateError(
            "pic: policy row at (t=" + std::to_string(t) +
            ", x=" + std::to_string(x) + ") has zero estimated mass");
      }
      double sum = 0.0;
      double* row = result.policy.table[static_cast<std::size_t>(t)].data() +
                    static_cast<std::size_t>(x) * problem.num_actions;
      for (int u = 0; u < problem.num_actions; ++u) {
        row[u] = std::exp(scores[static_cast<std::size_t>(u)] - top);
        sum += row[u];
      }
      for (int u = 0; u < problem.num_actions; ++u) row[u] /= sum;
    }
  }
  return result;
}

// Total-variation distance between the closed loop of the M-projected
// policy and the tilted target distribution.  The two are equal in exact
// arithmetic — the projected policy *is* the target's conditional — so
// anything beyond floating-point noise indicates a defect.
inline double closed_loop_equivalence_check(
    const DiscreteProblem& problem, const TabularPolicy& prior,
    const CostModel& cost, std::size_t cap = kDefaultEnumerationCap) {
  const DesiredDistribution desired =
      desired_distribution(problem, prior, cost, cap);
  const ProjectionResult projected =
      backward_pass(problem, cost, prior, ProjectionKind::M());
  const TrajectoryDistribution closed =
      enumerate_trajectories(problem, projected.policy, cost, cap);
  if (!support_equal(closed, desired.base)) {
    throw InternalError(
        "closed-loop check: supports diverged over a fixed problem");
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    tv += std::abs(closed.probability[i] - desired.weight[i]);
  }
  return 0.5 * tv;
}

// ---------------------------------------------------------------------------
// Exact Bayesian smoothing.  Interpreting exp(-cost) as a per-step
// observation likelihood on the prior chain, the backward messages are
//   beta_T(x)     = exp(-r_T(x)),
//   beta_t(x, u)  = exp(-r_t(x, u)) sum_y tau_t(y|x, u) beta_{t+1}(y),
//   beta_t(x)     = sum_u prior_t(u|x) beta_t(x, u),
// and the smoothed action conditional is pi_t(u|x) = prior beta(x, u) /
// beta(x).  This is the projected policy again, built through probability-
// domain message passing rather than the log-domain value recursion (the
// agreement of the two routes is a test).  Messages decay like exp(-cost),
// so very long horizons with large costs can underflow here — the value
// recursion is the log-domain twin for those.
// ---------------------------------------------------------------------------
struct SmoothingResult {
  TabularPolicy policy;
  std::vector<std::vector<double>> state_message;  // horizon + 1 rows, |X|
  std::vector<std::vector<double>> pair_message;   // horizon tables, |X||U|
};

inline SmoothingResult exact_smoothing(const DiscreteProblem& problem,
                                       const TabularPolicy& prior,
                                       const CostModel& cost) {
  SmoothingResult result;
  result.policy.num_states = problem.num_states;
  result.policy.num_actions = problem.num_actions;
  result.policy.table.assign(
      static_cast<std::size_t>(problem.horizon),
      std::vector<double>(
          static_cast<std::size_t>(problem.num_states) * problem.num_actions,
          0.0));
  result.state_message.assign(static_cast<std::size_t>(problem.horizon) + 1,
                              {});
  result.pair_message.assign(
      static_cast<std::size_t>(problem.horizon),
      std::vector<double>(
          static_cast<std::size_t>(problem.num_states) * problem.num_actions,
          0.0));

  // Which (t, x) the prior closed loop can reach at all; unreachable states
  // have no conditional to define and quietly keep the prior row.
  std::vector<std::vector<bool>> reachable(
      static_cast<std::size_t>(problem.horizon) + 1,
      std::vector<bool>(static_cast<std::size_t>(problem.num_states), false));
  for (int x = 0; x < problem.num_states; ++x) {
    reachable[0][static_cast<std::size_t>(x)] =
        problem.initial[static_cast<std::size_t>(x)] > 0.0;
  }
  for (int t = 0; t < problem.horizon; ++t) {
    for (int x = 0; x < problem.num_states; ++x) {
      if (!reachable[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)]) {
        continue;
      }
      for (int u = 0; u < problem.num_actions; ++u) {
        if (prior.prob(t, x, u) <= 0.0) continue;
        const double* tau = problem.transition_row(t, x, u);
        for (int y = 0; y < problem.num_states; ++y) {
          if (tau[y] > 0.0) {
            reachable[static_cast<std::size_t>(t) + 1]
                     [static_cast<std::size_t>(y)] = true;
          }
        }
      }
    }
  }

  std::vector<double>& terminal_message =
      result.state_message[static_cast<std::size_t>(problem.horizon)];
  terminal_message.resize(static_cast<std::size_t>(problem.num_states));
  for (int x = 0; x < problem.num_states; ++x) {
    terminal_message[static_cast<std::size_t>(x)] =
        std::exp(-cost.terminal_cost(x));
  }

  for (int t = problem.horizon - 1; t >= 0; --t) {
    const std::vector<double>& next =
        result.state_message[static_cast<std::size_t>(t) + 1];
    std::vector<double>& state_message =
        result.state_message[static_cast<std::size_t>(t)];
    std::vector<double>& pair_message =
        result.pair_message[static_cast<std::size_t>(t)];
    state_message.assign(static_cast<std::size_t>(problem.num_states), 0.0);
    for (int x = 0; x < problem.num_states; ++x) {
      double state_sum = 0.0;
      for (int u = 0; u < problem.num_actions; ++u) {
        const double* tau = problem.transition_row(t, x, u);
        double expectation = 0.0;
        for (int y = 0; y < problem.num_states; ++y) {
          expectation += tau[y] * next[static_cast<std::size_t>(y)];
        }
        const double message =
            std::exp(-cost.stage_cost(t, x, u)) * expectation;
        pair_message[static_cast<std::size_t>(x) * problem.num_actions + u] =
            message;
        state_sum += prior.prob(t, x, u) * message;
      }
      state_message[static_cast<std::size_t>(x)] = state_sum;

      double* row = result.policy.table[static_cast<std::size_t>(t)].data() +
                    static_cast<std::size_t>(x) * problem.num_actions;
      if (state_sum > 0.0) {
        double norm = 0.0;
        for (int u = 0; u < problem.num_actions; ++u) {
          row[u] = prior.prob(t, x, u) *
                   pair_message[static_cast<std::size_t>(x) *
                                    problem.num_actions +
                                u] /
                   state_sum;
          norm += row[u];
        }
        for (int u = 0; u < problem.num_actions; ++u) row[u] /= norm;
      } else if (reachable[static_cast<std::size_t>(t)]
                          [static_cast<std::size_t>(x)]) {
        throw DegenerateError(
            "smoothing: reachable state (t=" + std::to_string(t) +
            ", x=" + std::to_string(x) + ") has a zero backward message");
      } else {
        for (int u = 0; u < problem.num_actions; ++u) {
          row[u] = prior.prob(t, x, u);
        }
      }
    }
  }
  return result;
}

}  // namespace pctl

#endif  // PCTL_PIC_HPP_
