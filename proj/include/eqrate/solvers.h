// Copyright 2026 The eqrate Authors.
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

// Equilibrium solvers.
//
// SolveLle traces the KL-regularised quantal response continuum
//
//   x_i = argmax_z  u_i(z, x_{-i}) - tau KL(z || t_i)
//
// from tau_init down to tau_terminal by minimising the QRE loss
//
//   L(x) = sum_i  tau LSE(g_i / tau + log t_i) - x_i.g_i + tau KL(x_i || t_i)
//
// with g_i = u_i(., x_{-i}). L >= 0 and vanishes exactly at the QRE. The
// target t_i is the QRE at tau = infinity, so choosing it as the
// max-affinity-entropy distribution makes the traced path insensitive to
// cloned actions.
//
// SolveMreCce finds the CCE closest in KL to a target joint through its
// dual: alpha_i = softplus(theta_i) prices each deviation constraint and
// x = softmax(l_theta) with
//
//   l_theta(a) = t(a) - sum_i sum_a' alpha_i(a') [u_i(a', a_{-i}) - u_i(a)].

#ifndef EQRATE_SOLVERS_H_
#define EQRATE_SOLVERS_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "Eigen/Dense"
#include "eqrate/errors.h"
#include "eqrate/game.h"

namespace eqrate {

struct QREConfig {
  double tau_init = 1.0;
  double tau_decay = 0.95;
  int anneal_check_interval = 250;
  double anneal_gate = 1e-5;
  double tau_terminal = 1e-2;
  double epsilon_ne = 1e-3;
  double learning_rate = 1e-2;
  int max_steps = 200000;
  // Per-player targets t_i; empty means uniform.
  std::vector<Eigen::VectorXd> targets;
  // Store marginals in every trace record.
  bool record_profiles = false;

  void Validate(const Game& game) const;
};

struct CCEConfig {
  // log t(a) over the game's joint actions; empty means uniform.
  Eigen::VectorXd target_log_joint;
  double learning_rate = 1e-2;
  int max_steps = 100000;
  double epsilon_cce = 1e-4;
  int check_interval = 50;
  // theta at initialisation; alpha = softplus(theta).
  double initial_dual = 0.0;

  void Validate(const Game& game) const;
};

struct TraceRecord {
  int step = 0;
  double tau = 0.0;  // 0 for the CCE solver
  double loss = 0.0;
  double exploitability = 0.0;
  std::vector<Eigen::VectorXd> marginals;  // only when recorded
};

struct EquilibriumResult {
  std::variant<ProductProfile, JointDistribution> profile =
      ProductProfile(std::vector<Eigen::VectorXd>{});
  double exploitability = 0.0;
  std::vector<TraceRecord> trace;
  bool converged = false;
  int steps = 0;
  double final_tau = 0.0;
  // CCE only: alpha_i per player.
  std::vector<Eigen::VectorXd> duals;

  bool is_product() const {
    return std::holds_alternative<ProductProfile>(profile);
  }
  const ProductProfile& product() const {
    return std::get<ProductProfile>(profile);
  }
  const JointDistribution& joint() const {
    return std::get<JointDistribution>(profile);
  }
  // The joint distribution, lifting a product profile if needed.
  JointDistribution AsJoint() const;
};

class SolverConvergenceError : public ConvergenceError {
 public:
  SolverConvergenceError(const std::string& what, EquilibriumResult partial)
      : ConvergenceError(what), partial_(std::move(partial)) {}
  const EquilibriumResult& partial() const { return partial_; }

 private:
  EquilibriumResult partial_;
};

// softmax(g_i / tau + log t_i) with g_i the deviation payoff.
Eigen::VectorXd QreBestResponse(const Game& game, const ProductProfile& profile,
                                int player, double tau,
                                const Eigen::VectorXd& target);

double QreLoss(const Game& game, const ProductProfile& profile, double tau,
               const std::vector<Eigen::VectorXd>& targets);

// dL/dx_i for every player (the marginals treated as free vectors).
std::vector<Eigen::VectorXd> QreLossGradient(
    const Game& game, const ProductProfile& profile, double tau,
    const std::vector<Eigen::VectorXd>& targets);

// Approximates the limiting logit equilibrium selected by config.targets.
// Throws SolverConvergenceError when max_steps runs out first.
EquilibriumResult SolveLle(const Game& game, const QREConfig& config = {});

// log of the product of per-player targets, laid out like a utility tensor.
Eigen::VectorXd ProductTargetLogJoint(
    const Game& game, const std::vector<Eigen::VectorXd>& targets);

Eigen::VectorXd CceDualLogit(const Game& game,
                             const std::vector<Eigen::VectorXd>& alphas,
                             const Eigen::VectorXd& target_log_joint);

// L(theta) = logsumexp(l_theta) and its gradient in theta.
double CceDualLoss(const Game& game, const std::vector<Eigen::VectorXd>& thetas,
                   const Eigen::VectorXd& target_log_joint,
                   std::vector<Eigen::VectorXd>* gradient = nullptr);

EquilibriumResult SolveMreCce(const Game& game, const CCEConfig& config = {});

struct EnumerationConfig {
  int count = 4;
  double diversity_weight = 1.0;
  double epsilon = 1e-3;
  // Profiles optimised in parallel besides the LLE; 0 picks 4 * count.
  int replicas = 0;
  int max_steps = 20000;
  double learning_rate = 1e-2;
  // Rating vectors closer than this (L2) are the same equilibrium.
  double dedup_distance = 1e-3;
  // Smoothing temperature of the exploitability surrogate, annealed
  // geometrically from start to end.
  double smoothing_start = 1e-1;
  double smoothing_end = 1e-4;
  std::uint64_t seed = 0;
  QREConfig lle;
};

struct EnumerationResult {
  // equilibria[0] is the LLE, refined by descending the smoothed
  // exploitability when the annealed solve stops short of epsilon.
  std::vector<ProductProfile> equilibria;
  std::vector<double> exploitabilities;
  // Smallest L2 distance between rating vectors of two returned equilibria.
  double min_rating_distance = 0.0;
  // False when fewer than `count` distinct equilibria converged.
  bool complete = false;
};

// Concatenated regrets of every action of every player.
Eigen::VectorXd RatingVector(const Game& game, const ProductProfile& profile);

EnumerationResult EnumerateNes(const Game& game,
                               const EnumerationConfig& config);

struct RiskDominanceResult {
  // priors[i](k): belief that player i plays its k-th equilibrium strategy.
  std::vector<Eigen::VectorXd> priors;
  // payoffs(k, i): expected payoff of player i playing x_i^k while every
  // co-player j samples its equilibrium from priors[j].
  Eigen::MatrixXd payoffs;
  Eigen::MatrixXd initial_payoffs;  // same under uniform priors
};

RiskDominanceResult RiskDominanceBeliefs(
    const Game& game, const std::vector<ProductProfile>& equilibria,
    double eta = 1e-2, int iterations = 10000);

}  // namespace eqrate

#endif  // EQRATE_SOLVERS_H_
