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

#ifndef PCTL_TRAJECTORY_HPP_
#define PCTL_TRAJECTORY_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pctl/types.hpp"

namespace pctl {

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

// One path (x_0, u_0, x_1, ..., u_{T-1}, x_T).
struct Trajectory {
  std::vector<int> states;   // horizon + 1
  std::vector<int> actions;  // horizon

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// A closed-loop trajectory distribution over an explicitly enumerated
// support, together with the additive path cost of every trajectory.  The
// support is ordered lexicographically in (x_0, u_0, x_1, ...) and contains
// every path the *structure* allows: branches killed by a zero initial or
// transition probability are pruned, branches killed only by a zero policy
// probability are kept (with probability zero).  The support therefore
// depends on the problem alone, not on the policy, and distributions over
// the same problem align entry by entry.
struct TrajectoryDistribution {
  int horizon = 0;
  std::vector<Trajectory> support;
  std::vector<double> probability;
  std::vector<double> cost;

  std::size_t size() const { return support.size(); }
};

inline bool support_equal(const TrajectoryDistribution& a,
                          const TrajectoryDistribution& b) {
  return a.support == b.support;
}

inline TrajectoryDistribution enumerate_trajectories(
    const DiscreteProblem& problem, const TabularPolicy& policy,
    const CostModel& cost, std::size_t cap = kDefaultEnumerationCap) {
  TrajectoryDistribution dist;
  dist.horizon = problem.horizon;

  std::vector<int> states(static_cast<std::size_t>(problem.horizon) + 1);
  std::vector<int> actions(static_cast<std::size_t>(problem.horizon));

  // Depth-first in (x_0, u_0, x_1, ...) order, so leaves come out in
  // lexicographic order.
  auto recurse = [&](auto&& self, int t, double prob, double running_cost) -> void {
    if (t == problem.horizon) {
      if (dist.support.size() >= cap) {
        throw CapacityError("trajectory enumeration exceeds the cap of " +
                            std::to_string(cap) + " entries");
      }
      Trajectory trajectory;
      trajectory.states = states;
      trajectory.actions = actions;
      dist.support.push_back(std::move(trajectory));
      dist.probability.push_back(prob);
      dist.cost.push_back(running_cost +
                          cost.terminal_cost(states[static_cast<std::size_t>(t)]));
      return;
    }
    const int x = states[static_cast<std::size_t>(t)];
    for (int u = 0; u < problem.num_actions; ++u) {
      actions[static_cast<std::size_t>(t)] = u;
      const double pu = policy.prob(t, x, u);
      const double step_cost = running_cost + cost.stage_cost(t, x, u);
      for (int y = 0; y < problem.num_states; ++y) {
        const double tau = problem.transition(t, x, u, y);
        if (tau == 0.0) continue;  // structural zero: prune
        states[static_cast<std::size_t>(t) + 1] = y;
        self(self, t + 1, prob * pu * tau, step_cost);
      }
    }
  };

  for (int x0 = 0; x0 < problem.num_states; ++x0) {
    if (problem.initial[static_cast<std::size_t>(x0)] == 0.0) continue;
    states[0] = x0;
    recurse(recurse, 0, problem.initial[static_cast<std::size_t>(x0)], 0.0);
  }
  return dist;
}

// The tilted distribution p*(xi) ∝ p(xi) exp(-cost(xi)) over the prior's
// closed-loop support, with its normalizer eta = E[exp(-cost)].  log_eta is
// computed under a shift by the smallest positively weighted cost, so eta
// far below the double underflow threshold still yields a usable log.
struct DesiredDistribution {
  TrajectoryDistribution base;  // prior closed loop
  std::vector<double> weight;   // normalized tilted weights, aligned with base
  double eta = 0.0;
  double log_eta = -kInf;

  std::size_t size() const { return base.size(); }
};

inline DesiredDistribution desired_distribution(
    const DiscreteProblem& problem, const TabularPolicy& prior,
    const CostModel& cost, std::size_t cap = kDefaultEnumerationCap) {
  DesiredDistribution desired;
  desired.base = enumerate_trajectories(problem, prior, cost, cap);

  double shift = kInf;
  for (std::size_t i = 0; i < desired.base.size(); ++i) {
    if (desired.base.probability[i] > 0.0 && desired.base.cost[i] < shift) {
      shift = desired.base.cost[i];
    }
  }
  if (shift == kInf) {
    throw DegenerateError(
        "desired distribution: every trajectory with positive prior "
        "probability has infinite cost, so the normalizer is zero");
  }

  desired.weight.assign(desired.base.size(), 0.0);
  double shifted_sum = 0.0;
  for (std::size_t i = 0; i < desired.base.size(); ++i) {
    if (desired.base.probability[i] <= 0.0) continue;
    const double w =
        desired.base.probability[i] * std::exp(shift - desired.base.cost[i]);
    desired.weight[i] = w;
    shifted_sum += w;
  }
  desired.log_eta = std::log(shifted_sum) - shift;
  desired.eta = std::exp(desired.log_eta);
  for (double& w : desired.weight) w /= shifted_sum;
  return desired;
}

}  // namespace pctl

#endif  // PCTL_TRAJECTORY_HPP_
