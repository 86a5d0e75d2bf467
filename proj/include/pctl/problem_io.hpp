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

#ifndef PCTL_PROBLEM_IO_HPP_
#define PCTL_PROBLEM_IO_HPP_

// JSON problem files and the bundled instance generators.
//
// Schema, kind "discrete":
//   { "kind": "discrete", "name": "...",
//     "num_states": N, "num_actions": M, "horizon": T,
//     "initial": [N numbers],
//     "transitions": table or [T tables], each a flat row-major [x][u][x']
//                    array of N*M*N numbers,
//     "stage_costs": table or [T tables], each flat [x][u] of N*M numbers,
//     "terminal_costs": [N numbers],
//     "sigma": positive number (optional, default 1; scales all costs) }
//
// Schema, kind "lqg" (n = state_dim, m = action_dim):
//   { "kind": "lqg", "name": "...",
//     "state_dim": n, "action_dim": m, "horizon": T,
//     "F": table or [T tables], flat row-major n x (n+m),
//     "f": vector or [T vectors], length n,
//     "P": table or [T tables], flat n x n,
//     "R_zz": table or [T tables], flat (n+m) x (n+m),
//     "R_z": vector or [T vectors], length n+m,
//     "terminal_xx": flat n x n,   "terminal_x": [n numbers],
//     "prior_K": table or [T tables], flat m x n        (optional)
//     "prior_k": vector or [T vectors], length m        (optional)
//     "prior_Sigma": table or [T tables], flat m x m    (optional) }
//
// A per-step field is either a single flat numeric array (time-invariant,
// reused at every step) or an array of `horizon` such arrays.  All numbers
// must be finite; sigma is folded into the cost tables at load time.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pctl/lqg.hpp"
#include "pctl/rng.hpp"
#include "pctl/types.hpp"

namespace pctl {

struct DiscreteInstance {
  std::string name;
  DiscreteProblem problem;
  CostModel cost;
};

struct LqgInstance {
  std::string name;
  LinearGaussianDynamics dynamics;
  QuadraticCost cost;
  std::optional<LinearGaussianPolicy> prior;
};

struct ProblemFile {
  std::string kind;  // "discrete" or "lqg"
  std::optional<DiscreteInstance> discrete;
  std::optional<LqgInstance> lqg;
};

namespace io_detail {

using nlohmann::json;

inline std::vector<double> numeric_array(const json& node,
                                         std::size_t expected,
                                         const std::string& what) {
  if (!node.is_array()) {
    throw ValidationError(what + ": expected an array of numbers");
  }
  std::vector<double> values;
  values.reserve(node.size());
  for (const json& v : node) {
    if (!v.is_number()) {
      throw ValidationError(what + ": expected an array of finite numbers");
    }
    values.push_back(v.get<double>());
    if (!std::isfinite(values.back())) {
      throw ValidationError(what + ": entries must be finite");
    }
  }
  if (values.size() != expected) {
    throw ValidationError(what + ": expected " + std::to_string(expected) +
                          " numbers, got " + std::to_string(values.size()));
  }
  return values;
}

// A per-step field: either one flat table (broadcast over all steps) or an
// array of exactly `horizon` flat tables.
inline std::vector<std::vector<double>> per_step_tables(
    const json& node, int horizon, std::size_t expected,
    const std::string& what) {
  if (!node.is_array() || node.empty()) {
    throw ValidationError(what + ": expected a table or a per-step table list");
  }
  if (node.front().is_number()) {
    return std::vector<std::vector<double>>(
        static_cast<std::size_t>(horizon), numeric_array(node, expected, what));
  }
  if (static_cast<int>(node.size()) != horizon) {
    throw ValidationError(what + ": expected " + std::to_string(horizon) +
                          " per-step tables, got " +
                          std::to_string(node.size()));
  }
  std::vector<std::vector<double>> tables;
  tables.reserve(node.size());
  for (std::size_t t = 0; t < node.size(); ++t) {
    tables.push_back(numeric_array(node[t], expected,
                                   what + "[" + std::to_string(t) + "]"));
  }
  return tables;
}

inline int positive_int(const json& node, const std::string& what) {
  if (!node.is_number_integer() || node.get<long long>() <= 0) {
    throw ValidationError(what + ": expected a positive integer");
  }
  return static_cast<int>(node.get<long long>());
}

inline Eigen::MatrixXd as_matrix(const std::vector<double>& flat, int rows,
                                 int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = flat[static_cast<std::size_t>(r) * cols + c];
    }
  }
  return m;
}

inline Eigen::VectorXd as_vector(const std::vector<double>& flat) {
  return Eigen::Map<const Eigen::VectorXd>(flat.data(),
                                           static_cast<Eigen::Index>(flat.size()));
}

inline std::vector<Eigen::MatrixXd> matrix_list(const json& node, int horizon,
                                                int rows, int cols,
                                                const std::string& what) {
  const std::vector<std::vector<double>> tables = per_step_tables(
      node, horizon, static_cast<std::size_t>(rows) * cols, what);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(tables.size());
  for (const std::vector<double>& t : tables) out.push_back(as_matrix(t, rows, cols));
  return out;
}

inline std::vector<Eigen::VectorXd> vector_list(const json& node, int horizon,
                                                int length,
                                                const std::string& what) {
  const std::vector<std::vector<double>> tables =
      per_step_tables(node, horizon, static_cast<std::size_t>(length), what);
  std::vector<Eigen::VectorXd> out;
  out.reserve(tables.size());
  for (const std::vector<double>& t : tables) out.push_back(as_vector(t));
  return out;
}

}  // namespace io_detail

// Key lookups and type mismatches inside surface as nlohmann exceptions; the
// function-try-block translates them so malformed documents raise a single
// error type.
inline ProblemFile parse_problem(const nlohmann::json& document) try {
  using io_detail::json;
  if (!document.is_object() || !document.contains("kind") ||
      !document["kind"].is_string()) {
    throw ValidationError("problem file: missing string field \"kind\"");
  }
  ProblemFile file;
  file.kind = document["kind"].get<std::string>();
  const std::string name =
      document.contains("name") && document["name"].is_string()
          ? document["name"].get<std::string>()
          : "";

  if (file.kind == "discrete") {
    DiscreteInstance instance;
    instance.name = name;
    DiscreteProblem& problem = instance.problem;
    problem.num_states = io_detail::positive_int(document.at("num_states"),
                                                 "problem file: num_states");
    problem.num_actions = io_detail::positive_int(document.at("num_actions"),
                                                  "problem file: num_actions");
    problem.horizon =
        io_detail::positive_int(document.at("horizon"), "problem file: horizon");
    problem.initial = io_detail::numeric_array(
        document.at("initial"), static_cast<std::size_t>(problem.num_states),
        "problem file: initial");
    problem.transitions = io_detail::per_step_tables(
        document.at("transitions"), problem.horizon,
        static_cast<std::size_t>(problem.num_states) * problem.num_actions *
            problem.num_states,
        "problem file: transitions");
    double sigma = 1.0;
    if (document.contains("sigma")) {
      if (!document["sigma"].is_number()) {
        throw ValidationError("problem file: sigma must be a number");
      }
      sigma = document["sigma"].get<double>();
    }
    instance.cost = CostModel::scaled(
        problem.num_actions,
        io_detail::per_step_tables(
            document.at("stage_costs"), problem.horizon,
            static_cast<std::size_t>(problem.num_states) * problem.num_actions,
            "problem file: stage_costs"),
        io_detail::numeric_array(document.at("terminal_costs"),
                                 static_cast<std::size_t>(problem.num_states),
                                 "problem file: terminal_costs"),
        sigma);
    problem.validate();
    instance.cost.validate(problem);
    file.discrete = std::move(instance);
    return file;
  }

  if (file.kind == "lqg") {
    LqgInstance instance;
    instance.name = name;
    LinearGaussianDynamics& dynamics = instance.dynamics;
    dynamics.state_dim = io_detail::positive_int(document.at("state_dim"),
                                                 "problem file: state_dim");
    dynamics.action_dim = io_detail::positive_int(document.at("action_dim"),
                                                  "problem file: action_dim");
    dynamics.horizon =
        io_detail::positive_int(document.at("horizon"), "problem file: horizon");
    const int n = dynamics.state_dim;
    const int m = dynamics.action_dim;
    dynamics.F = io_detail::matrix_list(document.at("F"), dynamics.horizon, n,
                                        n + m, "problem file: F");
    dynamics.f = io_detail::vector_list(document.at("f"), dynamics.horizon, n,
                                        "problem file: f");
    dynamics.P = io_detail::matrix_list(document.at("P"), dynamics.horizon, n,
                                        n, "problem file: P");
    instance.cost.R_zz = io_detail::matrix_list(
        document.at("R_zz"), dynamics.horizon, n + m, n + m,
        "problem file: R_zz");
    instance.cost.R_z = io_detail::vector_list(
        document.at("R_z"), dynamics.horizon, n + m, "problem file: R_z");
    instance.cost.terminal_xx = io_detail::as_matrix(
        io_detail::numeric_array(document.at("terminal_xx"),
                                 static_cast<std::size_t>(n) * n,
                                 "problem file: terminal_xx"),
        n, n);
    instance.cost.terminal_x = io_detail::as_vector(io_detail::numeric_array(
        document.at("terminal_x"), static_cast<std::size_t>(n),
        "problem file: terminal_x"));
    if (document.contains("prior_K") || document.contains("prior_k") ||
        document.contains("prior_Sigma")) {
      LinearGaussianPolicy prior;
      prior.K = io_detail::matrix_list(document.at("prior_K"), dynamics.horizon,
                                       m, n, "problem file: prior_K");
      prior.k = io_detail::vector_list(document.at("prior_k"), dynamics.horizon,
                                       m, "problem file: prior_k");
      prior.Sigma = io_detail::matrix_list(document.at("prior_Sigma"),
                                           dynamics.horizon, m, m,
                                           "problem file: prior_Sigma");
      instance.prior = std::move(prior);
    }
    dynamics.validate();
    instance.cost.validate(dynamics);
    if (instance.prior.has_value()) instance.prior->validate(dynamics);
    file.lqg = std::move(instance);
    return file;
  }

  throw ValidationError("problem file: unknown kind \"" + file.kind +
                        "\" (expected \"discrete\" or \"lqg\")");
} catch (const nlohmann::json::exception& e) {
  throw ValidationError(std::string("problem file: ") + e.what());
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open problem file: " + path);
  }
  nlohmann::json document;
  try {
    in >> document;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("problem file " + path + ": " + e.what());
  }
  return parse_problem(document);
}

// ---------------------------------------------------------------------------
// Bundled generators.  Each returns the JSON document; the document is the
// canonical form (nlohmann round-trips doubles exactly, so a dump/parse
// cycle reproduces bit-identical tables).
// ---------------------------------------------------------------------------

// Two states, two actions, one step.  x_0 = 0, the action chooses the
// successor deterministically, the terminal cost is the successor index.
inline nlohmann::json make_chain2() {
  nlohmann::json j;
  j["kind"] = "discrete";
  j["name"] = "chain-2";
  j["num_states"] = 2;
  j["num_actions"] = 2;
  j["horizon"] = 1;
  j["initial"] = {1.0, 0.0};
  j["transitions"] = {1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0};
  j["stage_costs"] = {0.0, 0.0, 0.0, 0.0};
  j["terminal_costs"] = {0.0, 1.0};
  j["sigma"] = 1.0;
  return j;
}

// Same shape, but the chosen successor is only reached with probability
// `success` (the rest of the mass slips to the other state).
inline nlohmann::json make_chain2_stochastic(double success = 0.75) {
  if (!(success > 0.0) || !(success < 1.0)) {
    throw ValidationError("chain-2 generator: success must lie in (0, 1)");
  }
  const double slip = 1.0 - success;
  nlohmann::json j = make_chain2();
  j["name"] = "chain-2-stochastic";
  j["transitions"] = {success, slip, slip, success,
                      success, slip, slip, success};
  return j;
}

// Scalar linear-quadratic benchmark: x' = x + u (no noise), unit control
// cost, unit terminal cost, one step.
inline nlohmann::json make_lqg_scalar() {
  nlohmann::json j;
  j["kind"] = "lqg";
  j["name"] = "lqg-scalar";
  j["state_dim"] = 1;
  j["action_dim"] = 1;
  j["horizon"] = 1;
  j["F"] = {1.0, 1.0};
  j["f"] = {0.0};
  j["P"] = {0.0};
  j["R_zz"] = {0.0, 0.0, 0.0, 1.0};
  j["R_z"] = {0.0, 0.0};
  j["terminal_xx"] = {1.0};
  j["terminal_x"] = {0.0};
  return j;
}

// Random dense instance: strictly positive transition rows (uniform + 0.05,
// normalized), uniform [0, 1) costs.  Fully determined by the seed.
inline nlohmann::json make_random_discrete(int num_states, int num_actions,
                                           int horizon, std::uint64_t seed,
                                           const std::string& name) {
  SplitMix64 rng(detail::mix_bits(seed));
  auto random_row = [&rng](int n) {
    std::vector<double> row(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& v : row) {
      v = rng.uniform() + 0.05;
      sum += v;
    }
    for (double& v : row) v /= sum;
    return row;
  };

  nlohmann::json j;
  j["kind"] = "discrete";
  j["name"] = name;
  j["num_states"] = num_states;
  j["num_actions"] = num_actions;
  j["horizon"] = horizon;
  j["initial"] = random_row(num_states);

  nlohmann::json transitions = nlohmann::json::array();
  nlohmann::json stage = nlohmann::json::array();
  for (int t = 0; t < horizon; ++t) {
    std::vector<double> table;
    table.reserve(static_cast<std::size_t>(num_states) * num_actions *
                  num_states);
    for (int x = 0; x < num_states; ++x) {
      for (int u = 0; u < num_actions; ++u) {
        const std::vector<double> row = random_row(num_states);
        table.insert(table.end(), row.begin(), row.end());
      }
    }
    transitions.push_back(table);
    std::vector<double> costs(static_cast<std::size_t>(num_states) *
                              num_actions);
    for (double& v : costs) v = rng.uniform();
    stage.push_back(costs);
  }
  j["transitions"] = std::move(transitions);
  j["stage_costs"] = std::move(stage);
  std::vector<double> terminal(static_cast<std::size_t>(num_states));
  for (double& v : terminal) v = rng.uniform();
  j["terminal_costs"] = std::move(terminal);
  j["sigma"] = 1.0;
  return j;
}

// The bundled 4-state instance with its pinned seed.
inline nlohmann::json make_random4() {
  return make_random_discrete(4, 3, 3, 404, "random-4");
}

inline void save_problem(const std::string& path,
                         const nlohmann::json& document) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write problem file: " + path);
  }
  out << document.dump(2) << "\n";
}

}  // namespace pctl

#endif  // PCTL_PROBLEM_IO_HPP_
