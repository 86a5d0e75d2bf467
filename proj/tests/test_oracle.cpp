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

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pctl/pctl.hpp"

using Catch::Matchers::WithinAbs;
using namespace pctl_tests;

TEST_CASE("expected-cost dynamic program on the chains") {
  const pctl::DiscreteInstance det = chain2();
  const pctl::oracle::DpSolution det_sol =
      pctl::oracle::dp_soc(det.problem, det.cost);
  REQUIRE_THAT(det_sol.objective, WithinAbs(0.0, 0.0));
  REQUIRE(det_sol.action[0][0] == 0);
  REQUIRE_THAT(det_sol.value[1][1], WithinAbs(1.0, 0.0));

  const pctl::DiscreteInstance stoch = chain2_stochastic();
  const pctl::oracle::DpSolution stoch_sol =
      pctl::oracle::dp_soc(stoch.problem, stoch.cost);
  REQUIRE_THAT(stoch_sol.objective, WithinAbs(frozen::kStochQI0, 1e-15));
  REQUIRE(stoch_sol.action[0][0] == 0);
}

TEST_CASE("risk-seeking dynamic program on the chains") {
  const pctl::DiscreteInstance det = chain2();
  const pctl::oracle::DpSolution det_sol =
      pctl::oracle::dp_rsoc(det.problem, det.cost);
  REQUIRE_THAT(det_sol.objective, WithinAbs(0.0, 0.0));

  const pctl::DiscreteInstance stoch = chain2_stochastic();
  const pctl::oracle::DpSolution stoch_sol =
      pctl::oracle::dp_rsoc(stoch.problem, stoch.cost);
  REQUIRE_THAT(stoch_sol.objective, WithinAbs(frozen::kStochQM0, 1e-15));
  REQUIRE(stoch_sol.action[0][0] == 0);
}

TEST_CASE("deterministic policy evaluation matches the dynamic programs") {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const pctl::DiscreteInstance instance = random_instance_sized(seed);
    const pctl::oracle::DpSolution soc =
        pctl::oracle::dp_soc(instance.problem, instance.cost);
    std::vector<std::vector<double>> soc_values;
    REQUIRE_THAT(pctl::oracle::evaluate_deterministic_soc(
                     instance.problem, instance.cost, soc.action, &soc_values),
                 WithinAbs(soc.objective, 1e-13));
    for (int t = 0; t <= instance.problem.horizon; ++t) {
      for (int x = 0; x < instance.problem.num_states; ++x) {
        REQUIRE_THAT(soc_values[static_cast<std::size_t>(t)]
                               [static_cast<std::size_t>(x)],
                     WithinAbs(soc.value[static_cast<std::size_t>(t)]
                                        [static_cast<std::size_t>(x)],
                               1e-13));
      }
    }

    const pctl::oracle::DpSolution rsoc =
        pctl::oracle::dp_rsoc(instance.problem, instance.cost);
    std::vector<std::vector<double>> rsoc_values;
    REQUIRE_THAT(
        pctl::oracle::evaluate_deterministic_rsoc(
            instance.problem, instance.cost, rsoc.action, &rsoc_values),
        WithinAbs(rsoc.objective, 1e-13));
    REQUIRE_THAT(rsoc_values[0][0], WithinAbs(rsoc.value[0][0], 1e-13));
  }
}

TEST_CASE("policy evaluation agrees with enumeration-based objectives") {
  const pctl::DiscreteInstance instance = chain2_stochastic();
  // Fixed action map u = 0 everywhere.
  const std::vector<std::vector<int>> action{{0, 0}};
  const pctl::TabularPolicy policy =
      pctl::TabularPolicy::point_mass(instance.problem, action);
  const pctl::Objectives exact =
      pctl::objectives(instance.problem, policy, instance.cost);
  REQUIRE_THAT(pctl::oracle::evaluate_deterministic_soc(instance.problem,
                                                        instance.cost, action),
               WithinAbs(exact.soc, 1e-15));
  REQUIRE_THAT(pctl::oracle::evaluate_deterministic_rsoc(instance.problem,
                                                         instance.cost, action),
               WithinAbs(exact.rsoc, 1e-15));
  REQUIRE_THAT(exact.rsoc, WithinAbs(frozen::kStochQM0, 1e-15));
}

TEST_CASE("exhaustive search certifies the dynamic programs") {
  for (std::uint64_t seed : {31u, 32u}) {
    const pctl::DiscreteInstance instance = random_instance(3, 2, 2, seed);
    const pctl::oracle::SearchSolution soc_search =
        pctl::oracle::exhaustive_policy_search(instance.problem, instance.cost,
                                               pctl::oracle::ObjectiveKind::kSoc);
    const pctl::oracle::DpSolution soc =
        pctl::oracle::dp_soc(instance.problem, instance.cost);
    REQUIRE_THAT(soc_search.objective, WithinAbs(soc.objective, 1e-12));

    const pctl::oracle::SearchSolution rsoc_search =
        pctl::oracle::exhaustive_policy_search(
            instance.problem, instance.cost,
            pctl::oracle::ObjectiveKind::kRsoc);
    const pctl::oracle::DpSolution rsoc =
        pctl::oracle::dp_rsoc(instance.problem, instance.cost);
    REQUIRE_THAT(rsoc_search.objective, WithinAbs(rsoc.objective, 1e-12));
  }

  const pctl::DiscreteInstance stoch = chain2_stochastic();
  const pctl::oracle::SearchSolution search =
      pctl::oracle::exhaustive_policy_search(stoch.problem, stoch.cost,
                                             pctl::oracle::ObjectiveKind::kRsoc);
  REQUIRE_THAT(search.objective, WithinAbs(frozen::kStochQM0, 1e-15));
  REQUIRE(search.action[0][0] == 0);
}

TEST_CASE("exhaustive search refuses oversized policy spaces") {
  // 3^(4*5) = 3.4e9 deterministic policies, far over the cap.
  const pctl::DiscreteInstance instance = random_instance(4, 3, 5, 99);
  REQUIRE_THROWS_AS(
      pctl::oracle::exhaustive_policy_search(instance.problem, instance.cost,
                                             pctl::oracle::ObjectiveKind::kSoc),
      pctl::CapacityError);
}

TEST_CASE("expected-cost and risk-seeking optima can disagree") {
  const pctl::DiscreteInstance instance = risk_separation_instance();

  const pctl::oracle::DpSolution soc =
      pctl::oracle::dp_soc(instance.problem, instance.cost);
  REQUIRE(soc.action[0][0] == 0);  // safe
  REQUIRE_THAT(soc.objective, WithinAbs(frozen::kRiskSocSafe, 1e-15));

  const pctl::oracle::DpSolution rsoc =
      pctl::oracle::dp_rsoc(instance.problem, instance.cost);
  REQUIRE(rsoc.action[0][0] == 1);  // risky
  REQUIRE_THAT(rsoc.objective, WithinAbs(frozen::kRiskRsocRisky, 1e-15));

  REQUIRE_THAT(pctl::oracle::evaluate_deterministic_soc(
                   instance.problem, instance.cost, {{1, 0, 0}}),
               WithinAbs(frozen::kRiskSocRisky, 1e-15));
}
