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

// Command-line front end.  Exit codes: 0 success, 2 validation or
// configuration error, 3 numeric error, 4 a `check` run found a failing
// consistency check.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pctl/pctl.hpp"

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw pctl::ValidationError("cannot write output file: " + path.string());
  }
  return out;
}

void write_policy_csv(const std::filesystem::path& path,
                      const pctl::TabularPolicy& policy) {
  std::ofstream out = open_output(path);
  out << "t,x,u,probability\n";
  for (int t = 0; t < policy.horizon(); ++t) {
    for (int x = 0; x < policy.num_states; ++x) {
      for (int u = 0; u < policy.num_actions; ++u) {
        out << t << ',' << x << ',' << u << ',' << fmt(policy.prob(t, x, u))
            << '\n';
      }
    }
  }
}

// Terminal values have no action; they are written as u = -1 with Q = V.
void write_values_csv(const std::filesystem::path& path,
                      const pctl::ValueTables& values, int num_states,
                      int num_actions) {
  std::ofstream out = open_output(path);
  out << "t,x,u,Q,V\n";
  const int horizon = static_cast<int>(values.q.size());
  for (int t = 0; t < horizon; ++t) {
    for (int x = 0; x < num_states; ++x) {
      const double v = values.v[static_cast<std::size_t>(t)]
                               [static_cast<std::size_t>(x)];
      for (int u = 0; u < num_actions; ++u) {
        const double q = values.q[static_cast<std::size_t>(t)]
                                 [static_cast<std::size_t>(x) * num_actions + u];
        out << t << ',' << x << ',' << u << ',' << fmt(q) << ',' << fmt(v)
            << '\n';
      }
    }
  }
  for (int x = 0; x < num_states; ++x) {
    const double v = values.v[static_cast<std::size_t>(horizon)]
                             [static_cast<std::size_t>(x)];
    out << horizon << ',' << x << ",-1," << fmt(v) << ',' << fmt(v) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path,
                     const pctl::MMTrace& trace) {
  std::ofstream out = open_output(path);
  out << "iter,objective_A,objective_B,policy_delta,residual_mass\n";
  for (const pctl::MMRecord& record : trace.records) {
    out << record.iter << ',' << fmt(record.objective_soc) << ','
        << fmt(record.objective_rsoc) << ',' << fmt(record.policy_delta) << ','
        << fmt(record.residual_mass) << '\n';
  }
}

pctl::TabularPolicy read_policy_csv(const std::string& path,
                                    const pctl::DiscreteProblem& problem) {
  std::ifstream in(path);
  if (!in) {
    throw pctl::ValidationError("cannot open policy file: " + path);
  }
  pctl::TabularPolicy policy = pctl::TabularPolicy::uniform(problem);
  for (auto& table : policy.table) {
    table.assign(table.size(), 0.0);
  }
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,u,probability", 0) != 0) {
    throw pctl::ValidationError("policy file " + path +
                                ": expected header t,x,u,probability");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int t = 0, x = 0, u = 0;
    double p = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lf", &t, &x, &u, &p) != 4) {
      throw pctl::ValidationError("policy file " + path +
                                  ": malformed row: " + line);
    }
    if (t < 0 || t >= problem.horizon || x < 0 || x >= problem.num_states ||
        u < 0 || u >= problem.num_actions) {
      throw pctl::ValidationError("policy file " + path +
                                  ": index out of range in row: " + line);
    }
    policy.prob(t, x, u) = p;
  }
  policy.validate(problem);
  return policy;
}

pctl::TabularPolicy make_random_policy(const pctl::DiscreteProblem& problem,
                                       pctl::SplitMix64& rng) {
  pctl::TabularPolicy policy = pctl::TabularPolicy::uniform(problem);
  for (int t = 0; t < problem.horizon; ++t) {
    for (int x = 0; x < problem.num_states; ++x) {
      double sum = 0.0;
      for (int u = 0; u < problem.num_actions; ++u) {
        policy.prob(t, x, u) = rng.uniform() + 0.05;
        sum += policy.prob(t, x, u);
      }
      for (int u = 0; u < problem.num_actions; ++u) policy.prob(t, x, u) /= sum;
    }
  }
  return policy;
}

const pctl::DiscreteInstance& require_discrete(const pctl::ProblemFile& file,
                                               const std::string& command) {
  if (!file.discrete.has_value()) {
    throw pctl::ValidationError(command + ": requires a problem of kind "
                                          "\"discrete\", got \"" +
                                file.kind + "\"");
  }
  return *file.discrete;
}

const pctl::LqgInstance& require_lqg(const pctl::ProblemFile& file,
                                     const std::string& command) {
  if (!file.lqg.has_value()) {
    throw pctl::ValidationError(command + ": requires a problem of kind "
                                          "\"lqg\", got \"" +
                                file.kind + "\"");
  }
  return *file.lqg;
}

struct CommonOptions {
  std::string problem_path;
  std::string out_dir = ".";
};

int run_project(const CommonOptions& common, const std::string& kind_name,
                double alpha, const std::string& init) {
  const pctl::ProblemFile file = pctl::load_problem(common.problem_path);
  const pctl::DiscreteInstance& instance = require_discrete(file, "project");
  pctl::ProjectionKind kind = pctl::ProjectionKind::I();
  if (kind_name == "i") {
    kind = pctl::ProjectionKind::I();
  } else if (kind_name == "m") {
    kind = pctl::ProjectionKind::M();
  } else if (kind_name == "renyi") {
    if (alpha <= 0.0) {
      throw pctl::ValidationError(
          "project: --alpha must lie strictly inside (0, 1); the alpha -> 0 "
          "limit is --kind i");
    }
    if (alpha >= 1.0) {
      throw pctl::ValidationError(
          "project: --alpha must lie strictly inside (0, 1); the alpha -> 1 "
          "limit is --kind m");
    }
    kind = pctl::ProjectionKind::Renyi(alpha);
  } else {
    throw pctl::ValidationError("project: --kind must be i, m or renyi");
  }
  const pctl::TabularPolicy prior =
      (init == "uniform")
          ? pctl::TabularPolicy::uniform(instance.problem)
          : read_policy_csv(init, instance.problem);
  const pctl::ProjectionResult result =
      pctl::backward_pass(instance.problem, instance.cost, prior, kind);
  const std::filesystem::path out(common.out_dir);
  write_policy_csv(out / "policy.csv", result.policy);
  write_values_csv(out / "values.csv", result.values, instance.problem.num_states,
                   instance.problem.num_actions);
  std::cout << "projection " << kind.name() << " done; wrote policy.csv, values.csv\n";
  return 0;
}

int run_mm(const CommonOptions& common, const std::string& mode_name,
           int iters, double tol, const std::string& init) {
  const pctl::ProblemFile file = pctl::load_problem(common.problem_path);
  const pctl::DiscreteInstance& instance = require_discrete(file, "mm");
  if (mode_name != "soc" && mode_name != "rsoc") {
    throw pctl::ValidationError("mm: --mode must be soc or rsoc");
  }
  const pctl::MMMode mode =
      (mode_name == "soc") ? pctl::MMMode::kSoc : pctl::MMMode::kRsoc;
  pctl::MMConfig config;
  config.max_iters = iters;
  config.tol_policy = tol;
  if (init != "uniform") {
    config.init = read_policy_csv(init, instance.problem);
  }
  const pctl::MMTrace trace =
      pctl::mm_iterate(instance.problem, instance.cost, mode, config);
  const std::filesystem::path out(common.out_dir);
  write_trace_csv(out / "trace.csv", trace);
  write_policy_csv(out / "policy.csv", trace.final_policy);
  const pctl::ProjectionKind kind = (mode == pctl::MMMode::kSoc)
                                        ? pctl::ProjectionKind::I()
                                        : pctl::ProjectionKind::M();
  write_values_csv(out / "values.csv",
                   pctl::backward_pass(instance.problem, instance.cost,
                                       trace.final_policy, kind)
                       .values,
                   instance.problem.num_states, instance.problem.num_actions);
  std::cout << "mm " << mode_name << (trace.converged ? " converged" : " stopped")
            << " after " << trace.iterations
            << " sweeps; wrote trace.csv, policy.csv, values.csv\n";
  return 0;
}

int run_lqg(const CommonOptions& common, double alpha, int iters, double tol) {
  const pctl::ProblemFile file = pctl::load_problem(common.problem_path);
  const pctl::LqgInstance& instance = require_lqg(file, "lqg");
  pctl::LqgMMConfig config;
  config.max_iters = iters;
  config.tol_gain = tol;
  config.init = instance.prior;
  config.record_iterates = false;
  const pctl::LqgMMTrace trace =
      pctl::mm_lqg(instance.dynamics, instance.cost, alpha, config);

  const std::filesystem::path out(common.out_dir);
  {
    std::ofstream gains = open_output(out / "gains.csv");
    gains << "t,name,row,col,value\n";
    auto dump = [&gains](int t, const char* name, const Eigen::MatrixXd& m) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          gains << t << ',' << name << ',' << r << ',' << c << ','
                << fmt(m(r, c)) << '\n';
        }
      }
    };
    for (int t = 0; t < instance.dynamics.horizon; ++t) {
      dump(t, "K", trace.final_policy.K[static_cast<std::size_t>(t)]);
      dump(t, "k", trace.final_policy.k[static_cast<std::size_t>(t)]);
      dump(t, "Sigma", trace.final_policy.Sigma[static_cast<std::size_t>(t)]);
    }
  }
  {
    std::ofstream report = open_output(out / "report.txt");
    report << "lqg mm: alpha " << fmt(alpha) << ", "
           << (trace.converged ? "converged" : "stopped") << " after "
           << trace.iterations << " sweeps, last gain delta "
           << fmt(trace.gain_delta.empty() ? 0.0 : trace.gain_delta.back())
           << "\n";
  }
  std::cout << "lqg mm " << (trace.converged ? "converged" : "stopped")
            << " after " << trace.iterations
            << " sweeps; wrote gains.csv, report.txt\n";
  return 0;
}

int run_pic(const CommonOptions& common, std::uint64_t samples,
            std::uint64_t seed, int state, int time, bool policy_mode) {
  const pctl::ProblemFile file = pctl::load_problem(common.problem_path);
  const pctl::DiscreteInstance& instance = require_discrete(file, "pic");
  const pctl::TabularPolicy prior = pctl::TabularPolicy::uniform(instance.problem);
  const std::filesystem::path out(common.out_dir);
  if (policy_mode) {
    const pctl::PicPolicyEstimate estimate = pctl::pic_policy_mc(
        instance.problem, prior, instance.cost, samples, seed);
    write_policy_csv(out / "policy.csv", estimate.policy);
    std::cout << "pic policy estimate from " << samples
              << " samples per cell; wrote policy.csv\n";
    return 0;
  }
  const pctl::McEstimate estimate = pctl::pic_value_mc(
      instance.problem, prior, instance.cost, state, time, samples, seed);
  std::ofstream csv = open_output(out / "pic.csv");
  csv << "state,time,estimate,std_err,samples,seed\n";
  csv << state << ',' << time << ',' << fmt(estimate.value) << ','
      << fmt(estimate.std_err) << ',' << estimate.samples << ','
      << estimate.seed << '\n';
  std::cout << "pic value estimate " << fmt(estimate.value) << " +/- "
            << fmt(estimate.std_err) << "; wrote pic.csv\n";
  return 0;
}

int run_smooth(const CommonOptions& common) {
  const pctl::ProblemFile file = pctl::load_problem(common.problem_path);
  const pctl::DiscreteInstance& instance = require_discrete(file, "smooth");
  const pctl::TabularPolicy prior = pctl::TabularPolicy::uniform(instance.problem);
  const pctl::SmoothingResult result =
      pctl::exact_smoothing(instance.problem, prior, instance.cost);
  write_policy_csv(std::filesystem::path(common.out_dir) / "policy.csv",
                   result.policy);
  std::cout << "smoothing done; wrote policy.csv\n";
  return 0;
}

int run_check_discrete(const pctl::DiscreteInstance& instance,
                       const std::filesystem::path& out, int probes,
                       std::uint64_t seed) {
  std::ostringstream report;
  bool ok = true;
  auto line = [&report, &ok](const std::string& label, bool pass,
                             const std::string& detail) {
    report << label << ": " << (pass ? "PASS" : "FAIL") << " (" << detail
           << ")\n";
    ok = ok && pass;
  };

  report << "problem: " << (instance.name.empty() ? "(unnamed)" : instance.name)
         << " (discrete, |X|=" << instance.problem.num_states
         << ", |U|=" << instance.problem.num_actions
         << ", T=" << instance.problem.horizon << ")\n";

  const pctl::oracle::DpSolution soc_dp =
      pctl::oracle::dp_soc(instance.problem, instance.cost);
  const pctl::oracle::DpSolution rsoc_dp =
      pctl::oracle::dp_rsoc(instance.problem, instance.cost);

  // MM fixed points against the dynamic programs: the collapsed policy must
  // reproduce the optimal per-state values.
  {
    const pctl::MMTrace trace =
        pctl::mm_iterate(instance.problem, instance.cost, pctl::MMMode::kSoc);
    const pctl::DeterministicExtract extract =
        pctl::extract_deterministic(trace.final_policy);
    const double value = pctl::oracle::evaluate_deterministic_soc(
        instance.problem, instance.cost, extract.action);
    const double gap = std::abs(value - soc_dp.objective);
    line("oracle-agreement: mm(soc) vs dp_soc", gap <= 1e-6,
         "|objective gap| = " + fmt(gap) + ", tol 1e-06");
  }
  {
    const pctl::MMTrace trace =
        pctl::mm_iterate(instance.problem, instance.cost, pctl::MMMode::kRsoc);
    const pctl::DeterministicExtract extract =
        pctl::extract_deterministic(trace.final_policy);
    const double value = pctl::oracle::evaluate_deterministic_rsoc(
        instance.problem, instance.cost, extract.action);
    const double gap = std::abs(value - rsoc_dp.objective);
    line("oracle-agreement: mm(rsoc) vs dp_rsoc", gap <= 1e-6,
         "|objective gap| = " + fmt(gap) + ", tol 1e-06");
  }

  // DP against brute force, when the policy space is enumerable.
  const double policies =
      std::pow(static_cast<double>(instance.problem.num_actions),
               static_cast<double>(instance.problem.num_states) *
                   instance.problem.horizon);
  if (policies <= static_cast<double>(pctl::oracle::kExhaustiveSearchCap)) {
    const pctl::oracle::SearchSolution soc_search =
        pctl::oracle::exhaustive_policy_search(instance.problem, instance.cost,
                                               pctl::oracle::ObjectiveKind::kSoc);
    const double soc_gap = std::abs(soc_search.objective - soc_dp.objective);
    line("oracle-agreement: dp_soc vs exhaustive", soc_gap <= 1e-12,
         "|objective gap| = " + fmt(soc_gap) + ", tol 1e-12");
    const pctl::oracle::SearchSolution rsoc_search =
        pctl::oracle::exhaustive_policy_search(
            instance.problem, instance.cost, pctl::oracle::ObjectiveKind::kRsoc);
    const double rsoc_gap = std::abs(rsoc_search.objective - rsoc_dp.objective);
    line("oracle-agreement: dp_rsoc vs exhaustive", rsoc_gap <= 1e-12,
         "|objective gap| = " + fmt(rsoc_gap) + ", tol 1e-12");
  } else {
    report << "oracle-agreement: dp_soc vs exhaustive: SKIPPED (capacity)\n";
    report << "oracle-agreement: dp_rsoc vs exhaustive: SKIPPED (capacity)\n";
  }

  // Majorization and entropy-identity diagnostics on random probe policies.
  {
    pctl::SplitMix64 rng(pctl::detail::mix_bits(seed));
    std::vector<pctl::TabularPolicy> probe_policies;
    probe_policies.push_back(pctl::TabularPolicy::uniform(instance.problem));
    for (int i = 1; i < probes; ++i) {
      probe_policies.push_back(make_random_policy(instance.problem, rng));
    }
    const pctl::MajorizationReport major = pctl::majorization_report(
        instance.problem, instance.cost,
        pctl::TabularPolicy::uniform(instance.problem), probe_policies);
    line("majorization",
         major.max_deviation <= 1e-9 && major.soc.dominated &&
             major.rsoc.dominated,
         "max deviation = " + fmt(major.max_deviation) + ", tol 1e-09" +
             ", tangency soc = " + fmt(major.soc.tangency_gap) +
             ", rsoc = " + fmt(major.rsoc.tangency_gap));
    const pctl::MerlReport merl = pctl::merl_identity_check(
        instance.problem, instance.cost, probe_policies);
    line("entropy-identity", merl.max_deviation <= 1e-9,
         "max deviation = " + fmt(merl.max_deviation) + ", tol 1e-09");
  }

  report << "overall: " << (ok ? "PASS" : "FAIL") << "\n";
  std::ofstream out_file = open_output(out / "report.txt");
  out_file << report.str();
  std::cout << report.str();
  return ok ? 0 : 4;
}

int run_check_lqg(const pctl::LqgInstance& instance,
                  const std::filesystem::path& out) {
  std::ostringstream report;
  bool ok = true;
  auto line = [&report, &ok](const std::string& label, bool pass,
                             const std::string& detail) {
    report << label << ": " << (pass ? "PASS" : "FAIL") << " (" << detail
           << ")\n";
    ok = ok && pass;
  };
  report << "problem: " << (instance.name.empty() ? "(unnamed)" : instance.name)
         << " (lqg, n=" << instance.dynamics.state_dim
         << ", m=" << instance.dynamics.action_dim
         << ", T=" << instance.dynamics.horizon << ")\n";

  // Noise-free copy: the risk-sensitive recursion must coincide with the
  // classical one, and the backward pass must not depend on alpha.
  pctl::LinearGaussianDynamics noiseless = instance.dynamics;
  for (Eigen::MatrixXd& p : noiseless.P) p.setZero();
  const pctl::RiccatiSolution lqr = pctl::riccati_lqr(noiseless, instance.cost);
  const pctl::RiccatiSolution risk = pctl::leqr(noiseless, instance.cost);
  double gap = 0.0;
  for (int t = 0; t < noiseless.horizon; ++t) {
    gap = std::max(gap, (lqr.K[static_cast<std::size_t>(t)] -
                         risk.K[static_cast<std::size_t>(t)])
                            .cwiseAbs()
                            .maxCoeff());
  }
  line("leqr == lqr at P = 0", gap <= 1e-14, "max gain gap = " + fmt(gap));

  const pctl::LinearGaussianPolicy prior =
      instance.prior.has_value()
          ? *instance.prior
          : pctl::LinearGaussianPolicy::standard(instance.dynamics);
  double alpha_gap = 0.0;
  const pctl::LqgResult base = pctl::lqg_backward(noiseless, instance.cost,
                                                  prior, 0.0);
  for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
    const pctl::LqgResult other =
        pctl::lqg_backward(noiseless, instance.cost, prior, alpha);
    for (int t = 0; t < noiseless.horizon; ++t) {
      alpha_gap = std::max(alpha_gap,
                           (base.policy.K[static_cast<std::size_t>(t)] -
                            other.policy.K[static_cast<std::size_t>(t)])
                               .cwiseAbs()
                               .maxCoeff());
    }
  }
  line("backward pass alpha-independent at P = 0", alpha_gap <= 1e-12,
       "max gain gap = " + fmt(alpha_gap));

  // Informational: distance of the harmonically converging MM gains to the
  // deterministic optimum after the configured sweep budget.
  pctl::LqgMMConfig config;
  config.max_iters = 500;
  config.record_iterates = false;
  config.init = instance.prior;
  const pctl::LqgMMTrace trace =
      pctl::mm_lqg(instance.dynamics, instance.cost, 0.0, config);
  const pctl::RiccatiSolution target =
      pctl::riccati_lqr(instance.dynamics, instance.cost);
  double mm_gap = 0.0;
  for (int t = 0; t < instance.dynamics.horizon; ++t) {
    mm_gap = std::max(mm_gap, (trace.final_policy.K[static_cast<std::size_t>(t)] -
                               target.K[static_cast<std::size_t>(t)])
                                  .cwiseAbs()
                                  .maxCoeff());
  }
  report << "info: mm(alpha=0) gain distance to lqr after "
         << trace.iterations << " sweeps = " << fmt(mm_gap)
         << " (harmonic decay; not a gate)\n";

  report << "overall: " << (ok ? "PASS" : "FAIL") << "\n";
  std::ofstream out_file = open_output(out / "report.txt");
  out_file << report.str();
  std::cout << report.str();
  return ok ? 0 : 4;
}

int run_check(const CommonOptions& common, int probes, std::uint64_t seed) {
  const pctl::ProblemFile file = pctl::load_problem(common.problem_path);
  const std::filesystem::path out(common.out_dir);
  if (file.discrete.has_value()) {
    return run_check_discrete(*file.discrete, out, probes, seed);
  }
  return run_check_lqg(require_lqg(file, "check"), out);
}

int run_gen(const std::string& name, const std::string& out_path,
            std::uint64_t seed) {
  nlohmann::json document;
  if (name == "chain2") {
    document = pctl::make_chain2();
  } else if (name == "chain2-stochastic") {
    document = pctl::make_chain2_stochastic();
  } else if (name == "lqg-scalar") {
    document = pctl::make_lqg_scalar();
  } else if (name == "random4") {
    document = pctl::make_random_discrete(4, 3, 3, seed, "random-4");
  } else {
    throw pctl::ValidationError(
        "gen: --name must be one of chain2, chain2-stochastic, lqg-scalar, "
        "random4");
  }
  pctl::save_problem(out_path, document);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pctl: policies by projection onto exponentially tilted trajectory "
      "distributions"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--problem", common.problem_path, "problem JSON file")
        ->required();
    sub->add_option("--out", common.out_dir, "output directory")
        ->capture_default_str();
  };

  // project
  std::string project_kind = "i";
  double project_alpha = 0.5;
  std::string project_init = "uniform";
  CLI::App* project = app.add_subcommand(
      "project", "one backward projection pass against the tilted target");
  add_common(project);
  project->add_option("--kind", project_kind, "projection family: i, m, renyi")
      ->capture_default_str();
  project->add_option("--alpha", project_alpha,
                      "Renyi order in (0, 1), only with --kind renyi")
      ->capture_default_str();
  project->add_option("--init", project_init,
                      "prior policy: 'uniform' or a policy.csv path")
      ->capture_default_str();

  // mm
  std::string mm_mode = "soc";
  int mm_iters = 500;
  double mm_tol = 1e-9;
  std::string mm_init = "uniform";
  CLI::App* mm = app.add_subcommand(
      "mm", "majorize-minimize fixed point for the soc or rsoc objective");
  add_common(mm);
  mm->add_option("--mode", mm_mode, "objective: soc or rsoc")
      ->capture_default_str();
  mm->add_option("--iters", mm_iters, "maximum sweeps")->capture_default_str();
  mm->add_option("--tol", mm_tol, "sup-norm policy change tolerance")
      ->capture_default_str();
  mm->add_option("--init", mm_init, "initial policy: 'uniform' or policy.csv")
      ->capture_default_str();

  // lqg
  double lqg_alpha = 0.0;
  int lqg_iters = 500;
  double lqg_tol = 1e-9;
  CLI::App* lqg = app.add_subcommand(
      "lqg", "linear-Gaussian majorize-minimize (closed-form backward pass)");
  add_common(lqg);
  lqg->add_option("--alpha", lqg_alpha, "noise averaging in [0, 1]")
      ->capture_default_str();
  lqg->add_option("--iters", lqg_iters, "maximum sweeps")->capture_default_str();
  lqg->add_option("--tol", lqg_tol, "sup-norm gain change tolerance")
      ->capture_default_str();

  // pic
  std::uint64_t pic_samples = 10000;
  std::uint64_t pic_seed = 0;
  int pic_state = 0;
  int pic_time = 0;
  bool pic_policy = false;
  CLI::App* pic = app.add_subcommand(
      "pic", "Monte-Carlo path-integral estimates from prior rollouts");
  add_common(pic);
  pic->add_option("--samples", pic_samples, "samples per estimate")
      ->capture_default_str();
  pic->add_option("--seed", pic_seed, "RNG seed")->capture_default_str();
  pic->add_option("--state", pic_state, "state for the value estimate")
      ->capture_default_str();
  pic->add_option("--time", pic_time, "step for the value estimate")
      ->capture_default_str();
  pic->add_flag("--policy", pic_policy,
                "estimate the full projected policy instead of one value");

  // smooth
  CLI::App* smooth = app.add_subcommand(
      "smooth", "exact Bayesian-smoothing construction of the projected policy");
  add_common(smooth);

  // check
  int check_probes = 32;
  std::uint64_t check_seed = 7;
  CLI::App* check = app.add_subcommand(
      "check", "cross-validate solvers, oracles and identities on a problem");
  add_common(check);
  check->add_option("--probes", check_probes,
                    "number of probe policies for the identity checks")
      ->capture_default_str();
  check->add_option("--seed", check_seed, "probe RNG seed")
      ->capture_default_str();

  // gen
  std::string gen_name;
  std::string gen_out;
  std::uint64_t gen_seed = 404;
  CLI::App* gen = app.add_subcommand("gen", "write a bundled problem instance");
  gen->add_option("--name", gen_name,
                  "chain2, chain2-stochastic, lqg-scalar or random4")
      ->required();
  gen->add_option("--out", gen_out, "output JSON path")->required();
  gen->add_option("--seed", gen_seed, "seed for random4")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (project->parsed()) {
      return run_project(common, project_kind, project_alpha, project_init);
    }
    if (mm->parsed()) {
      return run_mm(common, mm_mode, mm_iters, mm_tol, mm_init);
    }
    if (lqg->parsed()) {
      return run_lqg(common, lqg_alpha, lqg_iters, lqg_tol);
    }
    if (pic->parsed()) {
      return run_pic(common, pic_samples, pic_seed, pic_state, pic_time,
                     pic_policy);
    }
    if (smooth->parsed()) {
      return run_smooth(common);
    }
    if (check->parsed()) {
      return run_check(common, check_probes, check_seed);
    }
    if (gen->parsed()) {
      return run_gen(gen_name, gen_out, gen_seed);
    }
  } catch (const pctl::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pctl::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pctl::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
