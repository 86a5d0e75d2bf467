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

#ifndef PCTL_MM_HPP_
#define PCTL_MM_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pctl/divergences.hpp"
#include "pctl/numeric.hpp"
#include "pctl/objectives.hpp"
#include "pctl/projection.hpp"
#include "pctl/trajectory.hpp"
#include "pctl/types.hpp"

namespace pctl {

// Which control objective the fixed-point iteration descends:
//   kSoc  : expected cost, driven by the I-projection backward pass;
//   kRsoc : risk-seeking -log E[exp(-cost)], driven by the M-projection.
enum class MMMode { kSoc, kRsoc };

struct MMConfig {
  int max_iters = 500;
  double tol_policy = 1e-9;     // sup-norm policy change
  double tol_objective = 1e-12;  // monitored objective change
  std::optional<TabularPolicy> init;  // default: uniform
};

// Slack allowed before a majorize-minimize step that *increased* the
// monitored objective is treated as an internal bug.
inline constexpr double kDescentSlack = 1e-10;

struct MMRecord {
  int iter = 0;
  double objective_soc = 0.0;
  double objective_rsoc = 0.0;
  // Sup-norm distance to the previous iterate; +inf on the first row, which
  // has no predecessor (so a "delta below tolerance" test can never
  // spuriously hold there).
  double policy_delta = kInf;
  // Largest per-row mass outside the argmax action, over all (t, x).
  double residual_mass = 0.0;
  // Whether the argmax action map is unchanged from the previous iterate.
  bool argmax_stable = false;
};

struct MMTrace {
  MMMode mode = MMMode::kSoc;
  std::vector<MMRecord> records;  // one per evaluated iterate, including init
  TabularPolicy final_policy;
  bool converged = false;
  int iterations = 0;  // backward passes performed
};

namespace detail {

inline double residual_mass(const TabularPolicy& policy) {
  double residual = 0.0;
  for (int t = 0; t < policy.horizon(); ++t) {
    for (int x = 0; x < policy.num_states; ++x) {
      const double* row = policy.row(t, x);
      double top = 0.0;
      for (int u = 0; u < policy.num_actions; ++u) top = std::max(top, row[u]);
      residual = std::max(residual, 1.0 - top);
    }
  }
  return residual;
}

}  // namespace detail

// Majorize-minimize fixed point: repeatedly run the backward pass with the
// current policy as prior and feed the projected policy back in.  Each pass
// minimizes a surrogate tangent at the current iterate, so the monitored
// objective can only go down; an increase beyond kDescentSlack means the
// library itself is broken and throws InternalError.  Stops when either the
// sup-norm policy change drops below tol_policy or the objective improvement
// drops below tol_objective (each alone certifies a fixed point).
//
// Objectives along the trace are evaluated with the O(T |X|^2 |U|)
// recursions rather than trajectory enumeration, so tracing never hits the
// enumeration capacity cap; the two evaluators agree to floating-point
// accuracy (this is cross-checked in the test suite).
inline MMTrace mm_iterate(const DiscreteProblem& problem, const CostModel& cost,
                          MMMode mode, const MMConfig& config = {}) {
  if (config.max_iters <= 0) {
    throw ValidationError("mm: max_iters must be positive");
  }
  if (!(config.tol_policy >= 0.0) || !(config.tol_objective >= 0.0)) {
    throw ValidationError("mm: tolerances must be nonnegative");
  }
  const ProjectionKind kind =
      (mode == MMMode::kSoc) ? ProjectionKind::I() : ProjectionKind::M();

  MMTrace trace;
  trace.mode = mode;
  TabularPolicy policy;
  if (config.init.has_value()) {
    policy = *config.init;
    policy.validate(problem);
  } else {
    policy = TabularPolicy::uniform(problem);
  }

  TabularPolicy previous;
  std::vector<std::vector<int>> previous_argmax;
  double previous_objective = kInf;

  for (int iter = 0;; ++iter) {
    MMRecord record;
    record.iter = iter;
    record.objective_soc = soc_objective_recursive(problem, policy, cost);
    record.objective_rsoc = rsoc_objective_recursive(problem, policy, cost);
    record.residual_mass = detail::residual_mass(policy);
    const std::vector<std::vector<int>> current_argmax = argmax_map(policy);
    const double monitored =
        (mode == MMMode::kSoc) ? record.objective_soc : record.objective_rsoc;

    if (iter > 0) {
      record.policy_delta = sup_distance(policy, previous);
      record.argmax_stable = (current_argmax == previous_argmax);
      if (monitored > previous_objective + kDescentSlack) {
        throw InternalError(
            "mm: monitored objective increased from " +
            std::to_string(previous_objective) + " to " +
            std::to_string(monitored) + " at iteration " + std::to_string(iter));
      }
    }
    trace.records.push_back(record);

    if (iter > 0 && (record.policy_delta < config.tol_policy ||
                     std::abs(previous_objective - monitored) <
                         config.tol_objective)) {
      trace.converged = true;
      break;
    }
    if (iter == config.max_iters) break;

    previous = policy;
    previous_argmax = current_argmax;
    previous_objective = monitored;
    policy = backward_pass(problem, cost, policy, kind).policy;
    trace.iterations = iter + 1;
  }
  trace.final_policy = std::move(policy);
  return trace;
}

// Collapse a near-deterministic policy onto its argmax action map (ties to
// the lowest action index).  max_residual reports the largest probability
// mass found outside the selected actions; within_tol says whether that
// stays under mass_tol.
struct DeterministicExtract {
  std::vector<std::vector<int>> action;
  double max_residual = 0.0;
  bool within_tol = true;
};

inline DeterministicExtract extract_deterministic(const TabularPolicy& policy,
                                                  double mass_tol = 1e-9) {
  DeterministicExtract extract;
  extract.action = argmax_map(policy);
  extract.max_residual = detail::residual_mass(policy);
  extract.within_tol = extract.max_residual <= mass_tol;
  return extract;
}

// ---------------------------------------------------------------------------
// Diagnostics: the two majorization identities and the entropy-regularized
// control identity.  Both are exact decompositions, so the reported
// deviations measure nothing but floating-point noise — they should sit at
// the 1e-12 scale and anything above 1e-9 indicates a real defect.
// ---------------------------------------------------------------------------

struct MajorizationSide {
  // The policy-independent constant of the decomposition.
  double constant = 0.0;
  // max over probes of |objective + divergence terms - constant|.
  double max_deviation = 0.0;
  // Deviation of the surrogate from the objective at the prior itself,
  // where the two must touch.
  double tangency_gap = 0.0;
  // Surrogate >= objective at every probe (up to kDescentSlack).
  bool dominated = true;
};

struct MajorizationReport {
  MajorizationSide soc;
  MajorizationSide rsoc;
  double max_deviation = 0.0;
};

// Verifies, per probe policy pi, the exact decompositions
//   soc :  A[pi] + kl(p_pi, p_rho) - kl(p_pi, p*_rho)   = -log eta[rho]
//   rsoc:  B[pi] + kl(p*_rho, p*_pi) - kl(p*_rho, p_pi) = E_{p*_rho}[cost]
// where rho is the prior and p* the tilted distribution.  The kl terms are
// nonnegative, which makes the right-hand sides tangent majorants of the two
// objectives; `dominated` checks that side as well.
inline MajorizationReport majorization_report(
    const DiscreteProblem& problem, const CostModel& cost,
    const TabularPolicy& prior, std::span<const TabularPolicy> probes,
    std::size_t cap = kDefaultEnumerationCap) {
  prior.validate(problem);
  const DesiredDistribution desired =
      desired_distribution(problem, prior, cost, cap);
  const TrajectoryDistribution& prior_closed = desired.base;

  MajorizationReport report;
  report.soc.constant = -desired.log_eta;
  report.rsoc.constant =
      weighted_sum(std::span<const double>(desired.weight),
                   std::span<const double>(prior_closed.cost));

  auto account = [](MajorizationSide& side, double objective,
                    double surrogate, double deviation, bool at_prior) {
    side.max_deviation = std::max(side.max_deviation, deviation);
    if (objective > surrogate + kDescentSlack) side.dominated = false;
    if (at_prior) side.tangency_gap = deviation;
  };

  for (const TabularPolicy& probe : probes) {
    probe.validate(problem);
    const bool at_prior = sup_distance(probe, prior) == 0.0;
    const TrajectoryDistribution probe_closed =
        enumerate_trajectories(problem, probe, cost, cap);
    const DesiredDistribution probe_desired =
        desired_distribution(problem, probe, cost, cap);

    const double soc_objective =
        weighted_sum(std::span<const double>(probe_closed.probability),
                     std::span<const double>(probe_closed.cost));
    const double kl_to_prior = kl(probe_closed, prior_closed);
    const double kl_to_desired = kl(probe_closed, desired);
    account(report.soc, soc_objective, report.soc.constant + kl_to_desired,
            std::abs(soc_objective + kl_to_prior - kl_to_desired -
                     report.soc.constant),
            at_prior);

    const double rsoc_objective =
        soft_min(std::span<const double>(probe_closed.probability),
                 std::span<const double>(probe_closed.cost));
    const double kl_desired_to_probe_desired = kl(desired, probe_desired);
    const double kl_desired_to_probe = kl(desired, probe_closed);
    account(report.rsoc, rsoc_objective,
            report.rsoc.constant + kl_desired_to_probe,
            std::abs(rsoc_objective + kl_desired_to_probe_desired -
                     kl_desired_to_probe - report.rsoc.constant),
            at_prior);
  }
  report.max_deviation =
      std::max(report.soc.max_deviation, report.rsoc.max_deviation);
  return report;
}

struct MerlReport {
  double constant = 0.0;       // horizon * log |U| + log eta[uniform]
  double max_deviation = 0.0;  // over probes
};

// The entropy-regularized control identity: against the uniform prior nu,
//   kl(p_pi, p*_nu) - ( A[pi] + E_pi[ sum_t log pi_t(u_t | x_t) ] )
// is the same constant, horizon log|U| + log eta[nu], for every policy pi.
// In other words, minimizing the divergence to the tilted uniform target is
// exactly entropy-regularized expected-cost minimization.
inline MerlReport merl_identity_check(const DiscreteProblem& problem,
                                      const CostModel& cost,
                                      std::span<const TabularPolicy> probes,
                                      std::size_t cap = kDefaultEnumerationCap) {
  const TabularPolicy uniform = TabularPolicy::uniform(problem);
  const DesiredDistribution desired =
      desired_distribution(problem, uniform, cost, cap);

  MerlReport report;
  report.constant =
      problem.horizon * std::log(static_cast<double>(problem.num_actions)) +
      desired.log_eta;

  for (const TabularPolicy& probe : probes) {
    probe.validate(problem);
    const TrajectoryDistribution probe_closed =
        enumerate_trajectories(problem, probe, cost, cap);

    const double soc_objective =
        weighted_sum(std::span<const double>(probe_closed.probability),
                     std::span<const double>(probe_closed.cost));
    double log_likelihood = 0.0;  // E_pi[ sum_t log pi_t(u_t | x_t) ]
    for (std::size_t i = 0; i < probe_closed.size(); ++i) {
      if (probe_closed.probability[i] <= 0.0) continue;
      const Trajectory& trajectory = probe_closed.support[i];
      double path_log = 0.0;
      for (int t = 0; t < problem.horizon; ++t) {
        path_log += std::log(
            probe.prob(t, trajectory.states[static_cast<std::size_t>(t)],
                       trajectory.actions[static_cast<std::size_t>(t)]));
      }
      log_likelihood += probe_closed.probability[i] * path_log;
    }
    const double lhs = kl(probe_closed, desired) - soc_objective - log_likelihood;
    report.max_deviation =
        std::max(report.max_deviation, std::abs(lhs - report.constant));
  }
  return report;
}

}  // namespace pctl

#endif  // PCTL_MM_HPP_
