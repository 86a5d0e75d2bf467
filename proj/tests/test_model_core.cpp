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

TEST_CASE("problem validation rejects malformed inputs") {
  pctl::DiscreteInstance instance = chain2();
  REQUIRE_NOTHROW(instance.problem.validate());

  pctl::DiscreteProblem bad = instance.problem;
  bad.initial = {0.5, 0.6};
  REQUIRE_THROWS_AS(bad.validate(), pctl::ValidationError);

  bad = instance.problem;
  bad.transitions[0][0] = -0.2;
  bad.transitions[0][1] = 1.2;
  REQUIRE_THROWS_AS(bad.validate(), pctl::ValidationError);

  bad = instance.problem;
  bad.transitions[0].pop_back();
  REQUIRE_THROWS_AS(bad.validate(), pctl::ValidationError);

  bad = instance.problem;
  bad.horizon = 0;
  REQUIRE_THROWS_AS(bad.validate(), pctl::ValidationError);
}

TEST_CASE("cost model folds the scale once and validates shapes") {
  const pctl::CostModel cost = pctl::CostModel::scaled(
      2, {{1.0, 2.0, 3.0, 4.0}}, {5.0, 6.0}, 0.5);
  REQUIRE_THAT(cost.stage_cost(0, 0, 1), WithinAbs(1.0, 0.0));
  REQUIRE_THAT(cost.stage_cost(0, 1, 0), WithinAbs(1.5, 0.0));
  REQUIRE_THAT(cost.terminal_cost(0), WithinAbs(2.5, 0.0));
  REQUIRE_THAT(cost.sigma, WithinAbs(0.5, 0.0));

  REQUIRE_THROWS_AS(
      pctl::CostModel::scaled(2, {{0.0, 0.0}}, {0.0, 0.0}, 0.0),
      pctl::ValidationError);
  REQUIRE_THROWS_AS(
      pctl::CostModel::scaled(2, {{0.0, 0.0}}, {0.0, 0.0}, -1.0),
      pctl::ValidationError);

  const pctl::DiscreteInstance instance = chain2();
  pctl::CostModel wrong = instance.cost;
  wrong.terminal.push_back(0.0);
  REQUIRE_THROWS_AS(wrong.validate(instance.problem), pctl::ValidationError);
}

TEST_CASE("infinite costs are allowed and mean forbidden") {
  const pctl::CostModel cost = pctl::CostModel::scaled(
      2, {{0.0, pctl::kInf, 0.0, 0.0}}, {0.0, 0.0}, 1.0);
  const pctl::DiscreteInstance instance = chain2();
  REQUIRE_NOTHROW(cost.validate(instance.problem));
  REQUIRE(std::isinf(cost.stage_cost(0, 0, 1)));
}

TEST_CASE("policies: uniform, point mass, distance, argmax") {
  const pctl::DiscreteInstance instance = risk_separation_instance();
  const pctl::TabularPolicy uniform =
      pctl::TabularPolicy::uniform(instance.problem);
  REQUIRE(uniform.horizon() == 1);
  REQUIRE_THAT(uniform.prob(0, 2, 1), WithinAbs(0.5, 0.0));
  REQUIRE_NOTHROW(uniform.validate(instance.problem));

  const pctl::TabularPolicy mass =
      pctl::TabularPolicy::point_mass(instance.problem, {{1, 0, 0}});
  REQUIRE_THAT(mass.prob(0, 0, 1), WithinAbs(1.0, 0.0));
  REQUIRE_THAT(mass.prob(0, 0, 0), WithinAbs(0.0, 0.0));
  REQUIRE_THAT(pctl::sup_distance(uniform, mass), WithinAbs(0.5, 0.0));

  // Ties resolve to the lowest action index.
  const std::vector<std::vector<int>> map = pctl::argmax_map(uniform);
  REQUIRE(map[0] == std::vector<int>{0, 0, 0});
  REQUIRE(pctl::argmax_map(mass)[0] == std::vector<int>{1, 0, 0});

  pctl::TabularPolicy bad = uniform;
  bad.prob(0, 0, 0) = 0.75;
  REQUIRE_THROWS_AS(bad.validate(instance.problem), pctl::ValidationError);
}

TEST_CASE("soft-min helpers match closed forms") {
  const std::vector<double> w{0.75, 0.25};
  const std::vector<double> v{0.0, 1.0};
  REQUIRE_THAT(pctl::soft_min(w, v), WithinAbs(frozen::kStochQM0, 1e-15));
  REQUIRE_THAT(pctl::soft_min_alpha(w, v, 0.5),
               WithinAbs(frozen::kStochQRenyiHalf0, 1e-15));
  REQUIRE_THAT(pctl::weighted_sum(w, v), WithinAbs(frozen::kStochQI0, 1e-15));

  // Zero weight screens an infinite value; all-infinite stays infinite.
  const std::vector<double> winf{0.0, 1.0};
  const std::vector<double> vinf{pctl::kInf, 2.0};
  REQUIRE_THAT(pctl::soft_min(winf, vinf), WithinAbs(2.0, 1e-15));
  REQUIRE_THAT(pctl::weighted_sum(winf, vinf), WithinAbs(2.0, 1e-15));
  const std::vector<double> vall{pctl::kInf, pctl::kInf};
  REQUIRE(std::isinf(pctl::soft_min(w, vall)));

  // Shift-invariance at extreme magnitudes (no overflow).
  const std::vector<double> big{1000.0, 1001.0};
  REQUIRE_THAT(pctl::soft_min(w, big) - 1000.0,
               WithinAbs(frozen::kStochQM0, 1e-12));
}

TEST_CASE("chain-2 enumeration is lexicographic and exact") {
  const pctl::DiscreteInstance instance = chain2();
  const pctl::TabularPolicy uniform =
      pctl::TabularPolicy::uniform(instance.problem);
  const pctl::TrajectoryDistribution dist =
      pctl::enumerate_trajectories(instance.problem, uniform, instance.cost);

  REQUIRE(dist.size() == 2);
  REQUIRE(dist.support[0].states == std::vector<int>{0, 0});
  REQUIRE(dist.support[0].actions == std::vector<int>{0});
  REQUIRE(dist.support[1].states == std::vector<int>{0, 1});
  REQUIRE(dist.support[1].actions == std::vector<int>{1});
  REQUIRE_THAT(dist.probability[0], WithinAbs(0.5, 0.0));
  REQUIRE_THAT(dist.probability[1], WithinAbs(0.5, 0.0));
  REQUIRE_THAT(dist.cost[0], WithinAbs(0.0, 0.0));
  REQUIRE_THAT(dist.cost[1], WithinAbs(1.0, 0.0));

  // Zero-probability policy branches stay in the support (structural zeros
  // are pruned; policy zeros are kept so supports align across policies).
  const pctl::TabularPolicy mass =
      pctl::TabularPolicy::point_mass(instance.problem, {{0, 0}});
  const pctl::TrajectoryDistribution massed =
      pctl::enumerate_trajectories(instance.problem, mass, instance.cost);
  REQUIRE(pctl::support_equal(dist, massed));
  REQUIRE_THAT(massed.probability[1], WithinAbs(0.0, 0.0));

  REQUIRE_THROWS_AS(
      pctl::enumerate_trajectories(instance.problem, uniform, instance.cost, 1),
      pctl::CapacityError);
}

TEST_CASE("desired distribution reproduces the chain-2 tilt") {
  const pctl::DiscreteInstance instance = chain2();
  const pctl::TabularPolicy uniform =
      pctl::TabularPolicy::uniform(instance.problem);
  const pctl::DesiredDistribution desired =
      pctl::desired_distribution(instance.problem, uniform, instance.cost);

  REQUIRE_THAT(desired.eta, WithinAbs(frozen::kChain2Eta, 1e-15));
  REQUIRE_THAT(desired.log_eta, WithinAbs(std::log(frozen::kChain2Eta), 1e-15));
  REQUIRE_THAT(desired.weight[0], WithinAbs(frozen::kChain2DesiredStay, 1e-15));
  REQUIRE_THAT(desired.weight[1], WithinAbs(frozen::kChain2DesiredMove, 1e-15));

  // All reachable trajectories forbidden: no normalizer.
  const pctl::CostModel forbidden = pctl::CostModel::scaled(
      2, {{0.0, 0.0, 0.0, 0.0}}, {pctl::kInf, pctl::kInf}, 1.0);
  REQUIRE_THROWS_AS(
      pctl::desired_distribution(instance.problem, uniform, forbidden),
      pctl::DegenerateError);
}

TEST_CASE("kl divergence: frozen value, zero handling, infinities") {
  const std::vector<double> p{0.5, 0.5};
  const std::vector<double> q{0.75, 0.25};
  REQUIRE_THAT(pctl::kl(p, q), WithinAbs(frozen::kKlHalfVsThreeQuarters, 1e-15));
  REQUIRE_THAT(pctl::kl(p, p), WithinAbs(0.0, 0.0));

  // p-zeros contribute nothing; q-zero under p-mass means +inf.
  const std::vector<double> pz{0.0, 1.0};
  REQUIRE_THAT(pctl::kl(pz, q), WithinAbs(std::log(4.0), 1e-15));
  const std::vector<double> qz{1.0, 0.0};
  REQUIRE(std::isinf(pctl::kl(p, qz)));
}

TEST_CASE("renyi divergence: order restriction, limits, skew symmetry") {
  const std::vector<double> p{0.5, 0.5};
  const std::vector<double> q{0.75, 0.25};
  REQUIRE_THROWS_AS(pctl::renyi(p, q, 0.0), pctl::ValidationError);
  REQUIRE_THROWS_AS(pctl::renyi(p, q, 1.0), pctl::ValidationError);
  REQUIRE_THROWS_AS(pctl::renyi(p, q, -0.3), pctl::ValidationError);

  REQUIRE_THAT(pctl::renyi(p, p, 0.5), WithinAbs(0.0, 1e-15));
  REQUIRE(pctl::renyi(p, q, 0.5) > 0.0);

  // D_alpha(p, q) = D_{1-alpha}(q, p) under the 1/(alpha(alpha-1)) scaling.
  for (double alpha : {0.2, 0.4, 0.7}) {
    REQUIRE_THAT(pctl::renyi(p, q, alpha),
                 WithinAbs(pctl::renyi(q, p, 1.0 - alpha), 1e-14));
  }

  // Limits recover the two kl orientations.
  REQUIRE_THAT(pctl::renyi(p, q, 1.0 - 1e-7), WithinAbs(pctl::kl(p, q), 1e-5));
  REQUIRE_THAT(pctl::renyi(p, q, 1e-7), WithinAbs(pctl::kl(q, p), 1e-5));
}

TEST_CASE("objectives on chain-2 and the Jensen gap") {
  const pctl::DiscreteInstance instance = chain2();
  const pctl::TabularPolicy uniform =
      pctl::TabularPolicy::uniform(instance.problem);
  const pctl::Objectives values =
      pctl::objectives(instance.problem, uniform, instance.cost);
  REQUIRE_THAT(values.soc, WithinAbs(frozen::kChain2SocUniform, 1e-15));
  REQUIRE_THAT(values.rsoc, WithinAbs(frozen::kChain2RsocUniform, 1e-15));
  REQUIRE(values.rsoc <= values.soc);

  REQUIRE_THAT(
      pctl::soc_objective_recursive(instance.problem, uniform, instance.cost),
      WithinAbs(values.soc, 1e-15));
  REQUIRE_THAT(
      pctl::rsoc_objective_recursive(instance.problem, uniform, instance.cost),
      WithinAbs(values.rsoc, 1e-15));
}

TEST_CASE("recursive objectives match enumeration on random instances") {
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
    const pctl::DiscreteInstance instance = random_instance_sized(seed);
    pctl::SplitMix64 rng(pctl::detail::mix_bits(seed + 1000));
    const pctl::TabularPolicy policy = random_policy(instance.problem, rng);
    const pctl::Objectives exact =
        pctl::objectives(instance.problem, policy, instance.cost);
    REQUIRE_THAT(
        pctl::soc_objective_recursive(instance.problem, policy, instance.cost),
        WithinAbs(exact.soc, 1e-12));
    REQUIRE_THAT(
        pctl::rsoc_objective_recursive(instance.problem, policy, instance.cost),
        WithinAbs(exact.rsoc, 1e-12));
    REQUIRE(exact.rsoc <= exact.soc + 1e-12);
  }
}
