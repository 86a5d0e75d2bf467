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

// Shared fixtures for the test binaries: the bundled instances, seeded
// random problems and policies, and a hand-built instance on which the
// expected-cost and risk-seeking optima pick different actions.

#ifndef PCTL_TESTS_HELPERS_HPP_
#define PCTL_TESTS_HELPERS_HPP_

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pctl/pctl.hpp"

namespace pctl_tests {

inline pctl::DiscreteInstance chain2() {
  return *pctl::parse_problem(pctl::make_chain2()).discrete;
}

inline pctl::DiscreteInstance chain2_stochastic() {
  return *pctl::parse_problem(pctl::make_chain2_stochastic()).discrete;
}

inline pctl::LqgInstance lqg_scalar() {
  return *pctl::parse_problem(pctl::make_lqg_scalar()).lqg;
}

inline pctl::DiscreteInstance random_instance(int num_states, int num_actions,
                                              int horizon,
                                              std::uint64_t seed) {
  return *pctl::parse_problem(
              pctl::make_random_discrete(num_states, num_actions, horizon,
                                         seed, "random"))
              .discrete;
}

// Random instance with sizes drawn from the seed: |X| in 2..5, |U| in 2..4,
// T in 1..5, strictly positive transition rows, costs in [0, 1).
inline pctl::DiscreteInstance random_instance_sized(std::uint64_t seed) {
  pctl::SplitMix64 rng(pctl::detail::mix_bits(seed));
  const int num_states = 2 + static_cast<int>(rng.next() % 4);
  const int num_actions = 2 + static_cast<int>(rng.next() % 3);
  const int horizon = 1 + static_cast<int>(rng.next() % 5);
  return random_instance(num_states, num_actions, horizon, rng.next());
}

inline pctl::TabularPolicy random_policy(const pctl::DiscreteProblem& problem,
                                         pctl::SplitMix64& rng) {
  pctl::TabularPolicy policy = pctl::TabularPolicy::uniform(problem);
  for (int t = 0; t < problem.horizon; ++t) {
    for (int x = 0; x < problem.num_states; ++x) {
      double sum = 0.0;
      for (int u = 0; u < problem.num_actions; ++u) {
        policy.prob(t, x, u) = rng.uniform() + 0.05;
        sum += policy.prob(t, x, u);
      }
      for (int u = 0; u < problem.num_actions; ++u) {
        policy.prob(t, x, u) /= sum;
      }
    }
  }
  return policy;
}

// Replace every transition row with a point mass on a seeded successor,
// turning the chain into a deterministic automaton.
inline void point_mass_transitions(pctl::DiscreteProblem& problem,
                                   pctl::SplitMix64& rng) {
  for (std::vector<double>& table : problem.transitions) {
    const std::size_t width = static_cast<std::size_t>(problem.num_states);
    const std::size_t rows = table.size() / width;
    for (std::size_t row = 0; row < rows; ++row) {
      double* cell = table.data() + row * width;
      const int hit = static_cast<int>(
          rng.next() % static_cast<std::uint64_t>(problem.num_states));
      for (int y = 0; y < problem.num_states; ++y) {
        cell[y] = (y == hit) ? 1.0 : 0.0;
      }
    }
  }
  problem.validate();
}

// Start surely in the given state.
inline void pin_initial_state(pctl::DiscreteProblem& problem, int x) {
  std::fill(problem.initial.begin(), problem.initial.end(), 0.0);
  problem.initial[static_cast<std::size_t>(x)] = 1.0;
  problem.validate();
}

// One step, start in state 0.  Action 0 ("safe") reaches state 1 surely at
// terminal cost 0.5; action 1 ("risky") reaches state 0 (terminal cost 0) or
// state 2 (terminal cost 1.2) with probability 1/2 each.  Expected cost
// prefers safe (0.5 < 0.6); the risk-seeking objective prefers risky
// (-log((1 + exp(-1.2)) / 2) = 0.4298... < 0.5).
inline pctl::DiscreteInstance risk_separation_instance() {
  pctl::DiscreteInstance instance;
  instance.name = "risk-separation";
  instance.problem.num_states = 3;
  instance.problem.num_actions = 2;
  instance.problem.horizon = 1;
  instance.problem.initial = {1.0, 0.0, 0.0};
  // Row-major [x][u][x'].
  instance.problem.transitions = {{
      0.0, 1.0, 0.0, /* x=0,u=1: */ 0.5, 0.0, 0.5,
      0.0, 1.0, 0.0, /* x=1,u=1: */ 0.0, 1.0, 0.0,
      0.0, 0.0, 1.0, /* x=2,u=1: */ 0.0, 0.0, 1.0,
  }};
  instance.problem.validate();
  instance.cost = pctl::CostModel::scaled(
      2, {{0.0, 0.0, 0.0, 0.0, 0.0, 0.0}}, {0.0, 0.5, 1.2}, 1.0);
  instance.cost.validate(instance.problem);
  return instance;
}

// Frozen reference values; every constant below was computed independently
// of the library (direct closed-form evaluation) before the solvers existed.
namespace frozen {

// chain-2, uniform prior.
inline constexpr double kChain2Eta = 0.68393972058572117;
inline constexpr double kChain2RsocUniform = 0.37988549304172248;  // -log eta
inline constexpr double kChain2SocUniform = 0.5;
inline constexpr double kChain2DesiredStay = 0.7310585786300049;
inline constexpr double kChain2DesiredMove = 0.2689414213699951;
inline constexpr double kChain2MerlConstant = 0.31326168751822281;

// stochastic chain-2 (success 0.75), uniform prior, t = 0, x = 0.
inline constexpr double kStochQI0 = 0.25;
inline constexpr double kStochQM0 = 0.17201106075713024;
inline constexpr double kStochQM1 = 0.64262598049121145;
inline constexpr double kStochQRenyiHalf0 = 0.20709617391409899;

// risk-separation instance.
inline constexpr double kRiskSocSafe = 0.5;
inline constexpr double kRiskSocRisky = 0.6;
inline constexpr double kRiskRsocRisky = 0.42986471322191405;

// span-level divergence check.
inline constexpr double kKlHalfVsThreeQuarters = 0.14384103622589042;

// scalar linear-Gaussian benchmark.
inline constexpr double kScalarRiccatiGain = -0.5;
inline constexpr double kScalarRiccatiValue = 0.5;
inline constexpr double kScalarLeqrGainP01 = -0.47619047619047616;  // -10/21

}  // namespace frozen

}  // namespace pctl_tests

#endif  // PCTL_TESTS_HELPERS_HPP_
