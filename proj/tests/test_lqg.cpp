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

namespace {

// n = m = 1, T = 1: x' = x + u, stage cost u^2/1 with R_uu = 2*?  The scalar
// benchmark bundled with the project: R_zz = diag(0, 1), terminal cost x^2/2
// scaled so that the deterministic optimum is K = -1/2.
pctl::LqgInstance scalar() { return lqg_scalar(); }

double max_gain_gap(const std::vector<Eigen::MatrixXd>& a,
                    const std::vector<Eigen::MatrixXd>& b) {
  double gap = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    gap = std::max(gap, (a[t] - b[t]).cwiseAbs().maxCoeff());
  }
  return gap;
}

// A well-conditioned 2-state / 2-action instance over three steps.
pctl::LqgInstance planar() {
  pctl::LqgInstance instance;
  instance.name = "planar";
  const int n = 2, m = 2, horizon = 3;
  instance.dynamics.state_dim = n;
  instance.dynamics.action_dim = m;
  instance.dynamics.horizon = horizon;
  Eigen::MatrixXd F(n, n + m);
  F << 1.0, 0.1, 1.0, 0.0,
       -0.1, 0.9, 0.2, 1.0;
  Eigen::MatrixXd P(n, n);
  P << 0.05, 0.01,
       0.01, 0.08;
  for (int t = 0; t < horizon; ++t) {
    instance.dynamics.F.push_back(F);
    instance.dynamics.f.push_back(Eigen::VectorXd::Constant(n, 0.1));
    instance.dynamics.P.push_back(P);
  }
  Eigen::MatrixXd R_zz = Eigen::MatrixXd::Zero(n + m, n + m);
  R_zz.topLeftCorner(n, n) = 0.5 * Eigen::MatrixXd::Identity(n, n);
  R_zz.bottomRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
  for (int t = 0; t < horizon; ++t) {
    instance.cost.R_zz.push_back(R_zz);
    instance.cost.R_z.push_back(Eigen::VectorXd::Zero(n + m));
  }
  instance.cost.terminal_xx = 2.0 * Eigen::MatrixXd::Identity(n, n);
  instance.cost.terminal_x = Eigen::VectorXd::Zero(n);
  instance.dynamics.validate();
  instance.cost.validate(instance.dynamics);
  return instance;
}

}  // namespace

TEST_CASE("scalar benchmark: one backward pass from the standard prior") {
  const pctl::LqgInstance instance = scalar();
  const pctl::LinearGaussianPolicy prior =
      pctl::LinearGaussianPolicy::standard(instance.dynamics);
  const pctl::LqgResult result =
      pctl::lqg_backward(instance.dynamics, instance.cost, prior, 0.0);

  REQUIRE_THAT(result.values.q_zz[0](1, 1), WithinAbs(2.0, 1e-14));
  REQUIRE_THAT(result.policy.Sigma[0](0, 0), WithinAbs(1.0 / 3.0, 1e-14));
  REQUIRE_THAT(result.policy.K[0](0, 0), WithinAbs(-1.0 / 3.0, 1e-14));
  REQUIRE_THAT(result.policy.k[0](0), WithinAbs(0.0, 1e-14));
}

TEST_CASE("scalar benchmark: sweeps follow the closed-form path") {
  const pctl::LqgInstance instance = scalar();
  pctl::LqgMMConfig config;
  config.max_iters = 5;
  config.tol_gain = 0.0;
  const pctl::LqgMMTrace trace =
      pctl::mm_lqg(instance.dynamics, instance.cost, 0.0, config);

  REQUIRE(trace.iterations == 5);
  REQUIRE(trace.iterates.size() == 5);
  for (int i = 1; i <= 5; ++i) {
    const double expected_gain = -static_cast<double>(i) / (2.0 * i + 1.0);
    const double expected_cov = 1.0 / (2.0 * i + 1.0);
    const pctl::LinearGaussianPolicy& sweep =
        trace.iterates[static_cast<std::size_t>(i - 1)];
    REQUIRE_THAT(sweep.K[0](0, 0), WithinAbs(expected_gain, 1e-14));
    REQUIRE_THAT(sweep.Sigma[0](0, 0), WithinAbs(expected_cov, 1e-14));
  }
}

TEST_CASE("scalar benchmark: the sweeps approach the Riccati gain") {
  const pctl::LqgInstance instance = scalar();
  const pctl::RiccatiSolution riccati =
      pctl::riccati_lqr(instance.dynamics, instance.cost);
  REQUIRE_THAT(riccati.K[0](0, 0), WithinAbs(frozen::kScalarRiccatiGain, 1e-15));
  REQUIRE_THAT(riccati.S[0](0, 0), WithinAbs(frozen::kScalarRiccatiValue, 1e-15));

  pctl::LqgMMConfig config;
  config.max_iters = 400000;
  config.tol_gain = 0.0;
  config.record_iterates = false;
  const pctl::LqgMMTrace trace =
      pctl::mm_lqg(instance.dynamics, instance.cost, 0.0, config);
  // Harmonic approach: the gain error after i sweeps is 1/(2(2i+1)).
  REQUIRE_THAT(trace.final_policy.K[0](0, 0),
               WithinAbs(frozen::kScalarRiccatiGain, 2e-6));
  REQUIRE(trace.iterates.empty());
}

TEST_CASE("risk-sensitive Riccati matches the oracle and its limits") {
  pctl::LqgInstance instance = scalar();
  instance.dynamics.P[0](0, 0) = 0.1;
  const pctl::RiccatiSolution risk = pctl::leqr(instance.dynamics,
                                                instance.cost);
  REQUIRE_THAT(risk.K[0](0, 0), WithinAbs(frozen::kScalarLeqrGainP01, 1e-15));

  // Noise-free: identical to the classical recursion.
  instance.dynamics.P[0](0, 0) = 0.0;
  const pctl::RiccatiSolution lqr = pctl::riccati_lqr(instance.dynamics,
                                                      instance.cost);
  const pctl::RiccatiSolution degenerate = pctl::leqr(instance.dynamics,
                                                      instance.cost);
  REQUIRE_THAT(max_gain_gap(lqr.K, degenerate.K), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT((lqr.S[0] - degenerate.S[0]).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 1e-15));
}

TEST_CASE("risk tilt breakdown raises a numeric error") {
  pctl::LqgInstance instance = scalar();
  instance.dynamics.P[0](0, 0) = 1.0;
  // Terminal curvature -2 makes lambda_min(P^1/2 S P^1/2) = -2 <= -1.
  instance.cost.terminal_xx(0, 0) = -2.0;
  REQUIRE_THROWS_AS(pctl::leqr(instance.dynamics, instance.cost),
                    pctl::NumericError);
}

TEST_CASE("an indefinite value stops the projection backward pass") {
  pctl::LqgInstance instance = scalar();
  instance.cost.terminal_xx(0, 0) = -2.0;
  const pctl::LinearGaussianPolicy prior =
      pctl::LinearGaussianPolicy::standard(instance.dynamics);
  REQUIRE_THROWS_AS(
      pctl::lqg_backward(instance.dynamics, instance.cost, prior, 0.0),
      pctl::NumericError);
  REQUIRE_THROWS_AS(
      pctl::lqg_backward(instance.dynamics, instance.cost, prior, 1.0),
      pctl::NumericError);
}

TEST_CASE("noise-free backward passes are independent of alpha") {
  pctl::LqgInstance instance = planar();
  for (Eigen::MatrixXd& P : instance.dynamics.P) P.setZero();
  const pctl::LinearGaussianPolicy prior =
      pctl::LinearGaussianPolicy::standard(instance.dynamics);
  const pctl::LqgResult base =
      pctl::lqg_backward(instance.dynamics, instance.cost, prior, 0.0);
  for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
    const pctl::LqgResult other =
        pctl::lqg_backward(instance.dynamics, instance.cost, prior, alpha);
    REQUIRE_THAT(max_gain_gap(base.policy.K, other.policy.K),
                 WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("planar instance: long runs land on both deterministic oracles") {
  const pctl::LqgInstance instance = planar();
  pctl::LqgMMConfig config;
  config.max_iters = 60000;
  config.tol_gain = 0.0;
  config.record_iterates = false;

  const pctl::LqgMMTrace expectation =
      pctl::mm_lqg(instance.dynamics, instance.cost, 0.0, config);
  const pctl::RiccatiSolution lqr =
      pctl::riccati_lqr(instance.dynamics, instance.cost);
  REQUIRE(max_gain_gap(expectation.final_policy.K, lqr.K) < 1e-3);

  const pctl::LqgMMTrace risk =
      pctl::mm_lqg(instance.dynamics, instance.cost, 1.0, config);
  const pctl::RiccatiSolution leqr_sol = pctl::leqr(instance.dynamics,
                                                    instance.cost);
  REQUIRE(max_gain_gap(risk.final_policy.K, leqr_sol.K) < 1e-3);
  // The two oracles genuinely differ here, so the two limits separate.
  REQUIRE(max_gain_gap(lqr.K, leqr_sol.K) > 1e-3);
}

TEST_CASE("gain deltas shrink monotonically on the scalar benchmark") {
  const pctl::LqgInstance instance = scalar();
  pctl::LqgMMConfig config;
  config.max_iters = 50;
  config.tol_gain = 0.0;
  const pctl::LqgMMTrace trace =
      pctl::mm_lqg(instance.dynamics, instance.cost, 0.0, config);
  REQUIRE(trace.gain_delta.size() == 50);
  for (std::size_t i = 1; i < trace.gain_delta.size(); ++i) {
    REQUIRE(trace.gain_delta[i] <= trace.gain_delta[i - 1] + 1e-15);
  }
}

TEST_CASE("lqg structures validate their shapes") {
  pctl::LqgInstance instance = planar();
  REQUIRE_NOTHROW(instance.dynamics.validate());
  REQUIRE_NOTHROW(instance.cost.validate(instance.dynamics));

  pctl::LinearGaussianDynamics bad = instance.dynamics;
  bad.P[0](0, 1) = 0.3;  // asymmetric
  REQUIRE_THROWS_AS(bad.validate(), pctl::ValidationError);

  bad = instance.dynamics;
  bad.P[0] = -Eigen::MatrixXd::Identity(2, 2);
  REQUIRE_THROWS_AS(bad.validate(), pctl::ValidationError);

  pctl::QuadraticCost bad_cost = instance.cost;
  bad_cost.R_zz[0](2, 2) = 0.0;
  bad_cost.R_zz[0](3, 3) = 0.0;  // action block no longer positive definite
  REQUIRE_THROWS_AS(bad_cost.validate(instance.dynamics),
                    pctl::ValidationError);

  pctl::LinearGaussianPolicy policy =
      pctl::LinearGaussianPolicy::standard(instance.dynamics);
  policy.Sigma[0] = Eigen::MatrixXd::Zero(2, 2);
  REQUIRE_THROWS_AS(policy.validate(instance.dynamics),
                    pctl::ValidationError);

  REQUIRE_THROWS_AS(pctl::lqg_backward(instance.dynamics, instance.cost,
                                       pctl::LinearGaussianPolicy::standard(
                                           instance.dynamics),
                                       1.5),
                    pctl::ValidationError);
}

TEST_CASE("alpha = 1 fixed point equals the risk-sensitive Riccati gains") {
  // At alpha = 1 the stationary point of the sweep map is the leqr solution:
  // seed the iteration at the oracle and verify it stays there.
  const pctl::LqgInstance instance = planar();
  const pctl::RiccatiSolution oracle = pctl::leqr(instance.dynamics,
                                                  instance.cost);
  pctl::LinearGaussianPolicy at_oracle =
      pctl::LinearGaussianPolicy::standard(instance.dynamics);
  for (int t = 0; t < instance.dynamics.horizon; ++t) {
    at_oracle.K[static_cast<std::size_t>(t)] =
        oracle.K[static_cast<std::size_t>(t)];
    at_oracle.k[static_cast<std::size_t>(t)] =
        oracle.k[static_cast<std::size_t>(t)];
    at_oracle.Sigma[static_cast<std::size_t>(t)] *= 1e-9;
  }
  const pctl::LqgResult step =
      pctl::lqg_backward(instance.dynamics, instance.cost, at_oracle, 1.0);
  REQUIRE(max_gain_gap(step.policy.K, oracle.K) < 1e-6);
}
