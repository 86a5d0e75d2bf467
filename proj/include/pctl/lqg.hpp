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

#ifndef PCTL_LQG_HPP_
#define PCTL_LQG_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pctl/types.hpp"

namespace pctl {

namespace detail {

inline Eigen::MatrixXd sym(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

inline void check_symmetric(const Eigen::MatrixXd& m, const std::string& what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError(what + ": matrix is not symmetric");
  }
}

inline double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym(m));
  return solver.eigenvalues().minCoeff();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Linear-Gaussian dynamics over the joint configuration z = (x, u):
//   x_{t+1} ~ Normal(F_t z_t + f_t, P_t),
// with n = state_dim, m = action_dim, F_t of shape n x (n + m) and P_t a
// positive semidefinite covariance (P = 0 is the deterministic case).
// ---------------------------------------------------------------------------
struct LinearGaussianDynamics {
  int state_dim = 0;
  int action_dim = 0;
  int horizon = 0;
  std::vector<Eigen::MatrixXd> F;  // horizon entries, n x (n+m)
  std::vector<Eigen::VectorXd> f;  // horizon entries, n
  std::vector<Eigen::MatrixXd> P;  // horizon entries, n x n

  void validate() const {
    if (state_dim <= 0 || action_dim <= 0 || horizon <= 0) {
      throw ValidationError("lqg: state_dim, action_dim and horizon must be positive");
    }
    if (static_cast<int>(F.size()) != horizon ||
        static_cast<int>(f.size()) != horizon ||
        static_cast<int>(P.size()) != horizon) {
      throw ValidationError("lqg: expected one F, f, P per step");
    }
    for (int t = 0; t < horizon; ++t) {
      if (F[static_cast<std::size_t>(t)].rows() != state_dim ||
          F[static_cast<std::size_t>(t)].cols() != state_dim + action_dim) {
        throw ValidationError("lqg: F at step " + std::to_string(t) +
                              " has wrong shape");
      }
      if (f[static_cast<std::size_t>(t)].size() != state_dim) {
        throw ValidationError("lqg: f at step " + std::to_string(t) +
                              " has wrong length");
      }
      const Eigen::MatrixXd& noise = P[static_cast<std::size_t>(t)];
      if (noise.rows() != state_dim || noise.cols() != state_dim) {
        throw ValidationError("lqg: P at step " + std::to_string(t) +
                              " has wrong shape");
      }
      detail::check_symmetric(noise, "lqg: P at step " + std::to_string(t));
      if (detail::min_eigenvalue(noise) < -1e-12) {
        throw ValidationError("lqg: P at step " + std::to_string(t) +
                              " is not positive semidefinite");
      }
    }
  }
};

// Quadratic cost 1/2 z' R_zz z + z' R_z per step plus a terminal quadratic
// in x.  Blocks are ordered (x, u); the (u, u) block must be positive
// definite so the control regularization never vanishes.
struct QuadraticCost {
  std::vector<Eigen::MatrixXd> R_zz;  // horizon entries, (n+m) x (n+m)
  std::vector<Eigen::VectorXd> R_z;   // horizon entries, n + m
  Eigen::MatrixXd terminal_xx;        // n x n
  Eigen::VectorXd terminal_x;         // n

  void validate(const LinearGaussianDynamics& dynamics) const {
    const int n = dynamics.state_dim;
    const int m = dynamics.action_dim;
    if (static_cast<int>(R_zz.size()) != dynamics.horizon ||
        static_cast<int>(R_z.size()) != dynamics.horizon) {
      throw ValidationError("lqg cost: expected one R_zz, R_z per step");
    }
    for (int t = 0; t < dynamics.horizon; ++t) {
      const Eigen::MatrixXd& rzz = R_zz[static_cast<std::size_t>(t)];
      if (rzz.rows() != n + m || rzz.cols() != n + m ||
          R_z[static_cast<std::size_t>(t)].size() != n + m) {
        throw ValidationError("lqg cost: block at step " + std::to_string(t) +
                              " has wrong shape");
      }
      detail::check_symmetric(rzz, "lqg cost: R_zz at step " + std::to_string(t));
      if (detail::min_eigenvalue(rzz.bottomRightCorner(m, m)) <= 0.0) {
        throw ValidationError("lqg cost: R_uu at step " + std::to_string(t) +
                              " must be positive definite");
      }
    }
    if (terminal_xx.rows() != n || terminal_xx.cols() != n ||
        terminal_x.size() != n) {
      throw ValidationError("lqg cost: terminal block has wrong shape");
    }
    detail::check_symmetric(terminal_xx, "lqg cost: terminal_xx");
  }
};

// Time-varying linear-Gaussian policy u ~ Normal(K_t x + k_t, Sigma_t).
struct LinearGaussianPolicy {
  std::vector<Eigen::MatrixXd> K;      // horizon entries, m x n
  std::vector<Eigen::VectorXd> k;      // horizon entries, m
  std::vector<Eigen::MatrixXd> Sigma;  // horizon entries, m x m, PD

  int horizon() const { return static_cast<int>(K.size()); }

  // The default prior: zero mean, unit covariance.
  static LinearGaussianPolicy standard(const LinearGaussianDynamics& dynamics) {
    LinearGaussianPolicy policy;
    policy.K.assign(static_cast<std::size_t>(dynamics.horizon),
                    Eigen::MatrixXd::Zero(dynamics.action_dim, dynamics.state_dim));
    policy.k.assign(static_cast<std::size_t>(dynamics.horizon),
                    Eigen::VectorXd::Zero(dynamics.action_dim));
    policy.Sigma.assign(static_cast<std::size_t>(dynamics.horizon),
                        Eigen::MatrixXd::Identity(dynamics.action_dim,
                                                  dynamics.action_dim));
    return policy;
  }

  void validate(const LinearGaussianDynamics& dynamics) const {
    const int n = dynamics.state_dim;
    const int m = dynamics.action_dim;
    if (horizon() != dynamics.horizon ||
        static_cast<int>(k.size()) != dynamics.horizon ||
        static_cast<int>(Sigma.size()) != dynamics.horizon) {
      throw ValidationError("lqg policy: expected one (K, k, Sigma) per step");
    }
    for (int t = 0; t < dynamics.horizon; ++t) {
      if (K[static_cast<std::size_t>(t)].rows() != m ||
          K[static_cast<std::size_t>(t)].cols() != n ||
          k[static_cast<std::size_t>(t)].size() != m) {
        throw ValidationError("lqg policy: gain at step " + std::to_string(t) +
                              " has wrong shape");
      }
      const Eigen::MatrixXd& sigma = Sigma[static_cast<std::size_t>(t)];
      if (sigma.rows() != m || sigma.cols() != m) {
        throw ValidationError("lqg policy: Sigma at step " + std::to_string(t) +
                              " has wrong shape");
      }
      detail::check_symmetric(sigma, "lqg policy: Sigma at step " + std::to_string(t));
      if (detail::min_eigenvalue(sigma) <= 0.0) {
        throw ValidationError("lqg policy: Sigma at step " + std::to_string(t) +
                              " must be positive definite");
      }
    }
  }
};

// Quadratic value tables: v_xx/v_x hold horizon + 1 entries (the last the
// terminal cost), q_zz/q_z one per decision step.  Constant offsets are not
// tracked anywhere in this module — policies depend only on the quadratic
// and linear parts.
struct QuadraticValue {
  std::vector<Eigen::MatrixXd> v_xx;
  std::vector<Eigen::VectorXd> v_x;
  std::vector<Eigen::MatrixXd> q_zz;
  std::vector<Eigen::VectorXd> q_z;
};

struct LqgResult {
  QuadraticValue values;
  LinearGaussianPolicy policy;
};

// ---------------------------------------------------------------------------
// One projection backward pass for linear-Gaussian problems.  alpha in
// [0, 1] interpolates how the next value is averaged over the transition
// noise: alpha = 0 is the plain expectation (I branch), alpha = 1 the soft
// minimum (M branch).  The noise enters through the resolvent
//   W = (V_xx^{-1} + alpha P)^{-1} = (I + alpha V_xx P)^{-1} V_xx,
// evaluated in the second, inverse-free form so a singular V_xx (e.g. zero
// terminal cost) is handled exactly.  The same factorization maps the linear
// term:  (V_xx^{-1} + alpha P)^{-1} (V_xx^{-1} V_x + f)
//        = (I + alpha V_xx P)^{-1} (V_x + V_xx f).
// Blockwise,
//   Q_zz = R_zz + F' W F,            Q_z = R_z + F' (I + alpha V_xx P)^{-1} (V_x + V_xx f),
//   Sigma* = (Sigma^{-1} + Q_uu)^{-1},
//   K*     = Sigma* (Sigma^{-1} K - Q_ux),
//   k*     = Sigma* (Sigma^{-1} k - Q_u),
//   V_xx   = Q_xx + K' Sigma^{-1} K - K*' Sigma*^{-1} K*,
//   V_x    = Q_x  + K' Sigma^{-1} k - K*' Sigma*^{-1} k*.
// ---------------------------------------------------------------------------
inline LqgResult lqg_backward(const LinearGaussianDynamics& dynamics,
                              const QuadraticCost& cost,
                              const LinearGaussianPolicy& prior, double alpha) {
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw ValidationError("lqg: alpha must lie in [0, 1]");
  }
  const int n = dynamics.state_dim;
  const int m = dynamics.action_dim;

  LqgResult result;
  result.values.v_xx.assign(static_cast<std::size_t>(dynamics.horizon) + 1, {});
  result.values.v_x.assign(static_cast<std::size_t>(dynamics.horizon) + 1, {});
  result.values.q_zz.assign(static_cast<std::size_t>(dynamics.horizon), {});
  result.values.q_z.assign(static_cast<std::size_t>(dynamics.horizon), {});
  result.policy.K.assign(static_cast<std::size_t>(dynamics.horizon), {});
  result.policy.k.assign(static_cast<std::size_t>(dynamics.horizon), {});
  result.policy.Sigma.assign(static_cast<std::size_t>(dynamics.horizon), {});

  result.values.v_xx[static_cast<std::size_t>(dynamics.horizon)] =
      detail::sym(cost.terminal_xx);
  result.values.v_x[static_cast<std::size_t>(dynamics.horizon)] = cost.terminal_x;

  const Eigen::MatrixXd identity_n = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd identity_m = Eigen::MatrixXd::Identity(m, m);

  for (int t = dynamics.horizon - 1; t >= 0; --t) {
    const Eigen::MatrixXd& v_xx_next =
        result.values.v_xx[static_cast<std::size_t>(t) + 1];
    const Eigen::VectorXd& v_x_next =
        result.values.v_x[static_cast<std::size_t>(t) + 1];

    // The Gaussian marginalization below is only well posed for (nearly)
    // convex next values; a genuinely indefinite V_xx means the tilted
    // target stopped being normalizable.
    if (detail::min_eigenvalue(v_xx_next) < -1e-9) {
      throw NumericError("lqg: value curvature entering step " +
                         std::to_string(t) + " is indefinite");
    }

    Eigen::FullPivLU<Eigen::MatrixXd> resolvent(
        identity_n +
        alpha * v_xx_next * dynamics.P[static_cast<std::size_t>(t)]);
    if (!resolvent.isInvertible()) {
      throw NumericError(
          "lqg: risk resolvent is singular at step " + std::to_string(t) +
          " (noise tilt exceeds the value curvature)");
    }
    const Eigen::MatrixXd w = detail::sym(resolvent.solve(v_xx_next));
    const Eigen::VectorXd mapped_linear = resolvent.solve(
        v_x_next + v_xx_next * dynamics.f[static_cast<std::size_t>(t)]);

    const Eigen::MatrixXd& f_mat = dynamics.F[static_cast<std::size_t>(t)];
    const Eigen::MatrixXd q_zz =
        detail::sym(cost.R_zz[static_cast<std::size_t>(t)] +
                    f_mat.transpose() * w * f_mat);
    const Eigen::VectorXd q_z = cost.R_z[static_cast<std::size_t>(t)] +
                                f_mat.transpose() * mapped_linear;

    const Eigen::MatrixXd q_xx = q_zz.topLeftCorner(n, n);
    const Eigen::MatrixXd q_ux = q_zz.bottomLeftCorner(m, n);
    const Eigen::MatrixXd q_uu = q_zz.bottomRightCorner(m, m);
    const Eigen::VectorXd q_x = q_z.head(n);
    const Eigen::VectorXd q_u = q_z.tail(m);

    const Eigen::MatrixXd& sigma = prior.Sigma[static_cast<std::size_t>(t)];
    const Eigen::MatrixXd sigma_inv =
        Eigen::LLT<Eigen::MatrixXd>(detail::sym(sigma)).solve(identity_m);
    Eigen::LLT<Eigen::MatrixXd> posterior_precision(
        detail::sym(sigma_inv + q_uu));
    if (posterior_precision.info() != Eigen::Success) {
      throw NumericError("lqg: policy precision at step " + std::to_string(t) +
                         " is not positive definite");
    }

    const Eigen::MatrixXd mean_gain =
        sigma_inv * prior.K[static_cast<std::size_t>(t)] - q_ux;
    const Eigen::VectorXd mean_offset =
        sigma_inv * prior.k[static_cast<std::size_t>(t)] - q_u;

    const Eigen::MatrixXd k_star = posterior_precision.solve(mean_gain);
    const Eigen::VectorXd k_offset = posterior_precision.solve(mean_offset);
    const Eigen::MatrixXd sigma_star =
        detail::sym(posterior_precision.solve(identity_m));

    result.values.q_zz[static_cast<std::size_t>(t)] = q_zz;
    result.values.q_z[static_cast<std::size_t>(t)] = q_z;
    result.policy.K[static_cast<std::size_t>(t)] = k_star;
    result.policy.k[static_cast<std::size_t>(t)] = k_offset;
    result.policy.Sigma[static_cast<std::size_t>(t)] = sigma_star;

    // K*' Sigma*^{-1} K* = (Sigma* Z)' Sigma*^{-1} (Sigma* Z) = Z' Sigma* Z
    // with Z the precision-weighted mean gain, so no explicit inverse of
    // Sigma* is ever formed.
    result.values.v_xx[static_cast<std::size_t>(t)] = detail::sym(
        q_xx +
        prior.K[static_cast<std::size_t>(t)].transpose() * sigma_inv *
            prior.K[static_cast<std::size_t>(t)] -
        k_star.transpose() * mean_gain);
    result.values.v_x[static_cast<std::size_t>(t)] =
        q_x +
        prior.K[static_cast<std::size_t>(t)].transpose() * sigma_inv *
            prior.k[static_cast<std::size_t>(t)] -
        k_star.transpose() * mean_offset;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Majorize-minimize on linear-Gaussian problems: run the backward pass, feed
// the full Gaussian policy back in as the next prior, repeat.  The posterior
// precision accumulates Q_uu every sweep, so the policy covariance contracts
// monotonically toward zero and the mean gains approach the deterministic
// optimum — harmonically, not geometrically: the accumulated precision grows
// linearly in the iteration count, so the per-sweep step size decays like
// 1/i.  Expect gain errors ~1/i, not ~rate^i (see the scalar closed form
// K_i = -i/(2i+1) in the tests).
// ---------------------------------------------------------------------------
struct LqgMMConfig {
  int max_iters = 500;
  double tol_gain = 1e-9;  // sup-norm change of (K, k) between sweeps
  std::optional<LinearGaussianPolicy> init;  // default: standard normal
  // Entry magnitude in (K, k) beyond which the iteration is declared
  // unstable (uncontrollable growth instead of convergence).
  double instability_threshold = 1e8;
  bool record_iterates = true;  // keep (K, k, Sigma) per sweep in the trace
};

struct LqgMMTrace {
  std::vector<LinearGaussianPolicy> iterates;  // per sweep, if recorded
  std::vector<double> gain_delta;              // sup-norm change per sweep
  LinearGaussianPolicy final_policy;
  bool converged = false;
  int iterations = 0;
};

inline LqgMMTrace mm_lqg(const LinearGaussianDynamics& dynamics,
                         const QuadraticCost& cost, double alpha,
                         const LqgMMConfig& config = {}) {
  if (config.max_iters <= 0) {
    throw ValidationError("lqg mm: max_iters must be positive");
  }
  LqgMMTrace trace;
  LinearGaussianPolicy policy;
  if (config.init.has_value()) {
    policy = *config.init;
    policy.validate(dynamics);
  } else {
    policy = LinearGaussianPolicy::standard(dynamics);
  }

  for (int iter = 0; iter < config.max_iters; ++iter) {
    LinearGaussianPolicy next =
        lqg_backward(dynamics, cost, policy, alpha).policy;
    double delta = 0.0;
    double magnitude = 0.0;
    for (int t = 0; t < dynamics.horizon; ++t) {
      delta = std::max(
          delta, (next.K[static_cast<std::size_t>(t)] -
                  policy.K[static_cast<std::size_t>(t)]).cwiseAbs().maxCoeff());
      delta = std::max(
          delta, (next.k[static_cast<std::size_t>(t)] -
                  policy.k[static_cast<std::size_t>(t)]).cwiseAbs().maxCoeff());
      magnitude = std::max(
          magnitude, next.K[static_cast<std::size_t>(t)].cwiseAbs().maxCoeff());
      magnitude = std::max(
          magnitude, next.k[static_cast<std::size_t>(t)].cwiseAbs().maxCoeff());
    }
    if (magnitude > config.instability_threshold) {
      throw NumericError("lqg mm: gains exceeded " +
                         std::to_string(config.instability_threshold) +
                         " at sweep " + std::to_string(iter) +
                         "; the iteration is unstable");
    }
    policy = std::move(next);
    trace.iterations = iter + 1;
    trace.gain_delta.push_back(delta);
    if (config.record_iterates) trace.iterates.push_back(policy);
    if (delta < config.tol_gain) {
      trace.converged = true;
      break;
    }
  }
  trace.final_policy = std::move(policy);
  return trace;
}

// ---------------------------------------------------------------------------
// Deterministic oracles.
// ---------------------------------------------------------------------------
struct RiccatiSolution {
  std::vector<Eigen::MatrixXd> K;  // m x n feedback gains
  std::vector<Eigen::VectorXd> k;  // m feedforward offsets
  std::vector<Eigen::MatrixXd> S;  // horizon + 1 value curvatures
  std::vector<Eigen::VectorXd> s;  // horizon + 1 value slopes
};

namespace detail {

// Shared Riccati loop.  `risk` = false is the classical LQR backward pass
// (certainty equivalent: additive noise shifts only the untracked
// constants); `risk` = true first passes the next value through the
// exponential-utility resolvent (I + S P)^{-1}, which is the closed-form
// optimal control of -log E[exp(-cost)].
inline RiccatiSolution riccati_impl(const LinearGaussianDynamics& dynamics,
                                    const QuadraticCost& cost, bool risk) {
  const int n = dynamics.state_dim;
  const int m = dynamics.action_dim;
  RiccatiSolution sol;
  sol.K.assign(static_cast<std::size_t>(dynamics.horizon), {});
  sol.k.assign(static_cast<std::size_t>(dynamics.horizon), {});
  sol.S.assign(static_cast<std::size_t>(dynamics.horizon) + 1, {});
  sol.s.assign(static_cast<std::size_t>(dynamics.horizon) + 1, {});
  sol.S[static_cast<std::size_t>(dynamics.horizon)] = sym(cost.terminal_xx);
  sol.s[static_cast<std::size_t>(dynamics.horizon)] = cost.terminal_x;

  const Eigen::MatrixXd identity_n = Eigen::MatrixXd::Identity(n, n);
  for (int t = dynamics.horizon - 1; t >= 0; --t) {
    Eigen::MatrixXd s_next = sol.S[static_cast<std::size_t>(t) + 1];
    Eigen::VectorXd slope_next = sol.s[static_cast<std::size_t>(t) + 1];

    if (risk) {
      const Eigen::MatrixXd& noise = dynamics.P[static_cast<std::size_t>(t)];
      // Breakdown test: the Gaussian tilt integral exists only while
      // lambda_min(P^{1/2} S P^{1/2}) > -1.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> noise_eig(sym(noise));
      const Eigen::MatrixXd noise_sqrt = noise_eig.operatorSqrt();
      const double tilt =
          min_eigenvalue(noise_sqrt * s_next * noise_sqrt);
      if (tilt <= -1.0 + 1e-9) {
        throw NumericError(
            "leqr: risk tilt breakdown at step " + std::to_string(t) +
            " (lambda_min(P^{1/2} S P^{1/2}) = " + std::to_string(tilt) +
            " <= -1); the exponential-cost expectation diverges");
      }
      Eigen::FullPivLU<Eigen::MatrixXd> resolvent(identity_n + s_next * noise);
      if (!resolvent.isInvertible()) {
        throw NumericError("leqr: risk resolvent is singular at step " +
                           std::to_string(t));
      }
      slope_next = resolvent.solve(slope_next);
      s_next = sym(resolvent.solve(s_next));
    }

    const Eigen::MatrixXd& f_mat = dynamics.F[static_cast<std::size_t>(t)];
    const Eigen::MatrixXd q_zz =
        sym(cost.R_zz[static_cast<std::size_t>(t)] +
            f_mat.transpose() * s_next * f_mat);
    const Eigen::VectorXd q_z =
        cost.R_z[static_cast<std::size_t>(t)] +
        f_mat.transpose() *
            (s_next * dynamics.f[static_cast<std::size_t>(t)] + slope_next);

    const Eigen::MatrixXd q_ux = q_zz.bottomLeftCorner(m, n);
    const Eigen::MatrixXd q_uu = q_zz.bottomRightCorner(m, m);
    Eigen::LLT<Eigen::MatrixXd> q_uu_llt(q_uu);
    if (q_uu_llt.info() != Eigen::Success) {
      throw NumericError(std::string(risk ? "leqr" : "lqr") +
                         ": Q_uu at step " + std::to_string(t) +
                         " is not positive definite");
    }
    const Eigen::MatrixXd gain = -q_uu_llt.solve(q_ux);
    const Eigen::VectorXd offset = -q_uu_llt.solve(q_z.tail(m));
    sol.K[static_cast<std::size_t>(t)] = gain;
    sol.k[static_cast<std::size_t>(t)] = offset;
    sol.S[static_cast<std::size_t>(t)] =
        sym(q_zz.topLeftCorner(n, n) + q_ux.transpose() * gain);
    sol.s[static_cast<std::size_t>(t)] = q_z.head(n) + q_ux.transpose() * offset;
  }
  return sol;
}

}  // namespace detail

// Classical finite-horizon LQR (expected quadratic cost).
inline RiccatiSolution riccati_lqr(const LinearGaussianDynamics& dynamics,
                                   const QuadraticCost& cost) {
  return detail::riccati_impl(dynamics, cost, false);
}

// Risk-seeking exponential-cost LQR; coincides with riccati_lqr when P = 0.
inline RiccatiSolution leqr(const LinearGaussianDynamics& dynamics,
                            const QuadraticCost& cost) {
  return detail::riccati_impl(dynamics, cost, true);
}

}  // namespace pctl

#endif  // PCTL_LQG_HPP_
