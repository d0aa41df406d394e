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

#include "eqrate/solvers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "adam.h"
#include "eqrate/kernels.h"

namespace eqrate {
namespace {

using Eigen::Index;
using Eigen::VectorXd;
using Marginals = std::vector<VectorXd>;

double LogSumExp(const VectorXd& z) {
  const double m = z.maxCoeff();
  return m + std::log((z.array() - m).exp().sum());
}

VectorXd Softmax(const VectorXd& z) {
  const VectorXd e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

double Softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double Sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::vector<Index> Offsets(const Game& game) {
  std::vector<Index> offsets(game.num_players() + 1, 0);
  for (int i = 0; i < game.num_players(); ++i) {
    offsets[i + 1] = offsets[i] + game.num_actions(i);
  }
  return offsets;
}

void CheckTargets(const Game& game, const Marginals& targets) {
  if (static_cast<int>(targets.size()) != game.num_players()) {
    throw DimensionError("need one target per player");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (targets[i].size() != game.num_actions(i)) {
      throw DimensionError("target size differs from action count of " +
                           game.player_name(i));
    }
    CheckSimplex(targets[i], 1e-6, "target");
    if ((targets[i].array() <= 0.0).any()) {
      throw ParameterError("targets must have full support");
    }
  }
}

Marginals LogOf(const Marginals& xs) {
  Marginals out;
  for (const VectorXd& x : xs) out.push_back(x.array().log().matrix());
  return out;
}

Marginals Deviations(const Game& game, const Marginals& x) {
  Marginals g;
  for (int i = 0; i < game.num_players(); ++i) {
    g.push_back(ContractAllBut(game.utility(i), game.shape(), x, i));
  }
  return g;
}

double ExploitabilityFrom(const Marginals& x, const Marginals& g) {
  double total = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    total += std::max(0.0, g[i].maxCoeff() - x[i].dot(g[i]));
  }
  return total;
}

// out_j = sum_{i != j} d/dx_j u_i(d_i, x_{-i}). Contracting u_i against d_i
// first leaves one smaller tensor shared by every j.
Marginals CrossTerms(const Game& game, const Marginals& x, const Marginals& d) {
  const int n = game.num_players();
  Marginals out;
  for (int j = 0; j < n; ++j) out.push_back(VectorXd::Zero(game.num_actions(j)));
  if (n < 2) return out;
  for (int i = 0; i < n; ++i) {
    const TensorShape rest = game.shape().Without(i);
    const VectorXd w = ContractAxis(game.utility(i), game.shape(), i, d[i]);
    if (n == 2) {
      out[1 - i] += w;
      continue;
    }
    Marginals others;
    for (int j = 0; j < n; ++j) {
      if (j != i) others.push_back(x[j]);
    }
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      out[j] += ContractAllBut(w, rest, others, j < i ? j : j - 1);
    }
  }
  return out;
}

double QreLossFrom(const Marginals& x, const Marginals& logx,
                   const Marginals& g, double tau, const Marginals& logt) {
  double loss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    loss += tau * LogSumExp(g[i] / tau + logt[i]) - x[i].dot(g[i]);
    for (Index a = 0; a < x[i].size(); ++a) {
      if (x[i][a] > 0.0) loss += tau * x[i][a] * (logx[i][a] - logt[i][a]);
    }
  }
  return loss;
}

// Gradient of the QRE loss in the marginals. Without the KL term this is the
// gradient of the smoothed exploitability sum_i tau LSE(g_i/tau) - x_i.g_i.
Marginals QreGradientFrom(const Game& game, const Marginals& x,
                          const Marginals& logx, const Marginals& g,
                          double tau, const Marginals& logt, bool with_kl) {
  Marginals d;
  for (size_t i = 0; i < x.size(); ++i) {
    d.push_back(Softmax(g[i] / tau + logt[i]) - x[i]);
  }
  Marginals grad = CrossTerms(game, x, d);
  for (size_t j = 0; j < x.size(); ++j) {
    grad[j] -= g[j];
    if (with_kl) {
      grad[j].array() += tau * (logx[j] - logt[j]).array() + tau;
    }
  }
  return grad;
}

// x = softmax(theta + log t) per player, with log x kept exactly.
void LogitProfile(const VectorXd& theta, const std::vector<Index>& offsets,
                  const Marginals& logt, Marginals* x, Marginals* logx) {
  x->clear();
  logx->clear();
  for (size_t i = 0; i + 1 < offsets.size(); ++i) {
    const VectorXd z =
        theta.segment(offsets[i], offsets[i + 1] - offsets[i]) + logt[i];
    VectorXd lz = z.array() - LogSumExp(z);
    x->push_back(lz.array().exp().matrix());
    logx->push_back(std::move(lz));
  }
}

// Chain rule through x = softmax(theta + c): x * (G - x.G).
void AccumulateLogitGradient(const Marginals& x, const Marginals& grad_x,
                             const std::vector<Index>& offsets,
                             VectorXd* grad_theta) {
  for (size_t i = 0; i < x.size(); ++i) {
    grad_theta->segment(offsets[i], x[i].size()) +=
        (x[i].array() * (grad_x[i].array() - x[i].dot(grad_x[i]))).matrix();
  }
}

ProductProfile Renormalized(const Marginals& x) {
  Marginals out;
  for (const VectorXd& xi : x) out.push_back(xi / xi.sum());
  return ProductProfile(std::move(out));
}

// Regrets of every player under a joint distribution held as a raw tensor.
Marginals JointRegrets(const Game& game, const VectorXd& joint) {
  Marginals regrets;
  for (int i = 0; i < game.num_players(); ++i) {
    const VectorXd others = SumAxis(joint, game.shape(), i);
    const VectorXd dev =
        ContractComplement(game.utility(i), game.shape(), i, others);
    regrets.push_back(dev.array() - game.utility(i).dot(joint));
  }
  return regrets;
}

Marginals SplitSoftplus(const VectorXd& theta,
                        const std::vector<Index>& offsets) {
  Marginals alphas;
  for (size_t i = 0; i + 1 < offsets.size(); ++i) {
    alphas.push_back(theta.segment(offsets[i], offsets[i + 1] - offsets[i])
                         .unaryExpr(&Softplus));
  }
  return alphas;
}

VectorXd UniformLogJoint(const Game& game) {
  return VectorXd::Constant(game.num_profiles(),
                            -std::log(static_cast<double>(game.num_profiles())));
}

// Descends the smoothed exploitability from `start`, cooling its temperature
// geometrically from tau_start to tau_end over the first half of the budget.
// Returns the least exploitable iterate seen.
ProductProfile PolishNe(const Game& game, const ProductProfile& start,
                        double tau_start, double tau_end, double epsilon,
                        int max_steps, double learning_rate) {
  const std::vector<Index> offsets = Offsets(game);
  const Marginals logt = LogOf(UniformTargets(game));
  VectorXd theta(offsets.back());
  for (int i = 0; i < game.num_players(); ++i) {
    theta.segment(offsets[i], game.num_actions(i)) =
        start.marginal(i).array().max(1e-300).log().matrix() - logt[i];
  }
  internal::Adam adam(theta.size(), learning_rate);
  ProductProfile best = start;
  double best_e = Exploitability(game, start);
  const int cooling = std::max(1, max_steps / 2);
  Marginals x, logx;
  for (int step = 0; step < max_steps && best_e > epsilon; ++step) {
    LogitProfile(theta, offsets, logt, &x, &logx);
    const Marginals g = Deviations(game, x);
    const double e = ExploitabilityFrom(x, g);
    if (e < best_e) {
      best_e = e;
      best = Renormalized(x);
    }
    const double frac = std::min(1.0, static_cast<double>(step) / cooling);
    const double tau = tau_start * std::pow(tau_end / tau_start, frac);
    const Marginals grad_x =
        QreGradientFrom(game, x, logx, g, tau, logt, /*with_kl=*/false);
    VectorXd grad = VectorXd::Zero(theta.size());
    AccumulateLogitGradient(x, grad_x, offsets, &grad);
    adam.Step(theta, grad);
  }
  return best;
}

}  // namespace

JointDistribution EquilibriumResult::AsJoint() const {
  if (is_product()) return JointDistribution::FromProduct(product());
  return joint();
}

void QREConfig::Validate(const Game& game) const {
  if (!(tau_init > 0.0) || !(tau_terminal > 0.0) || tau_terminal > tau_init) {
    throw ParameterError("need 0 < tau_terminal <= tau_init");
  }
  if (!(tau_decay > 0.0 && tau_decay < 1.0)) {
    throw ParameterError("tau_decay must lie in (0, 1)");
  }
  if (anneal_check_interval < 1 || max_steps < 0) {
    throw ParameterError("check interval must be >= 1 and max_steps >= 0");
  }
  if (!(anneal_gate > 0.0) || !(epsilon_ne >= 0.0) || !(learning_rate > 0.0)) {
    throw ParameterError("gate and learning rate must be positive");
  }
  if (!targets.empty()) CheckTargets(game, targets);
}

void CCEConfig::Validate(const Game& game) const {
  if (target_log_joint.size() != 0) {
    if (target_log_joint.size() != game.num_profiles()) {
      throw DimensionError("target log joint has the wrong size");
    }
    if (!target_log_joint.allFinite()) {
      throw ParameterError("target log joint must be finite");
    }
  }
  if (!(learning_rate > 0.0) || !(epsilon_cce > 0.0) || check_interval < 1 ||
      max_steps < 0 || !std::isfinite(initial_dual)) {
    throw ParameterError("invalid CCE solver configuration");
  }
}

VectorXd QreBestResponse(const Game& game, const ProductProfile& profile,
                         int player, double tau, const VectorXd& target) {
  if (!(tau > 0.0)) throw ParameterError("tau must be positive");
  if (target.size() != game.num_actions(player)) {
    throw DimensionError("target size differs from action count");
  }
  const VectorXd g = DeviationPayoff(game, profile, player);
  return Softmax(g / tau + target.array().log().matrix());
}

double QreLoss(const Game& game, const ProductProfile& profile, double tau,
               const std::vector<VectorXd>& targets) {
  if (!(tau > 0.0)) throw ParameterError("tau must be positive");
  CheckTargets(game, targets);
  const Marginals& x = profile.marginals();
  if (static_cast<int>(x.size()) != game.num_players()) {
    throw DimensionError("profile does not match game");
  }
  return QreLossFrom(x, LogOf(x), Deviations(game, x), tau, LogOf(targets));
}

std::vector<VectorXd> QreLossGradient(const Game& game,
                                      const ProductProfile& profile, double tau,
                                      const std::vector<VectorXd>& targets) {
  if (!(tau > 0.0)) throw ParameterError("tau must be positive");
  CheckTargets(game, targets);
  const Marginals& x = profile.marginals();
  if (static_cast<int>(x.size()) != game.num_players()) {
    throw DimensionError("profile does not match game");
  }
  return QreGradientFrom(game, x, LogOf(x), Deviations(game, x), tau,
                         LogOf(targets), /*with_kl=*/true);
}

EquilibriumResult SolveLle(const Game& game, const QREConfig& config) {
  config.Validate(game);
  const Marginals targets =
      config.targets.empty() ? UniformTargets(game) : config.targets;
  const Marginals logt = LogOf(targets);
  const std::vector<Index> offsets = Offsets(game);
  // Logits start at zero so the first iterate is the target itself.
  VectorXd theta = VectorXd::Zero(offsets.back());
  internal::Adam adam(theta.size(), config.learning_rate);
  double tau = config.tau_init;

  EquilibriumResult result;
  Marginals x, logx;
  int step = 0;
  for (;; ++step) {
    LogitProfile(theta, offsets, logt, &x, &logx);
    const Marginals g = Deviations(game, x);
    if (step % config.anneal_check_interval == 0) {
      TraceRecord record;
      record.step = step;
      record.tau = tau;
      record.loss = QreLossFrom(x, logx, g, tau, logt);
      record.exploitability = ExploitabilityFrom(x, g);
      if (config.record_profiles) record.marginals = x;
      result.trace.push_back(record);
      if (record.exploitability <= config.epsilon_ne) {
        result.converged = true;
        break;
      }
      if (step > 0 && record.loss <= config.anneal_gate) {
        if (tau <= config.tau_terminal) {
          result.converged = true;
          break;
        }
        tau = std::max(tau * config.tau_decay, config.tau_terminal);
      }
    }
    if (step >= config.max_steps) break;
    const Marginals grad_x =
        QreGradientFrom(game, x, logx, g, tau, logt, /*with_kl=*/true);
    VectorXd grad = VectorXd::Zero(theta.size());
    AccumulateLogitGradient(x, grad_x, offsets, &grad);
    adam.Step(theta, grad);
  }
  result.profile = Renormalized(x);
  result.exploitability = Exploitability(game, result.product());
  result.steps = step;
  result.final_tau = tau;
  if (!result.converged) {
    throw SolverConvergenceError(
        "LLE solver hit max_steps at tau " + std::to_string(tau) +
            " with exploitability " + std::to_string(result.exploitability),
        std::move(result));
  }
  return result;
}

VectorXd ProductTargetLogJoint(const Game& game,
                               const std::vector<VectorXd>& targets) {
  CheckTargets(game, targets);
  VectorXd log_joint = VectorXd::Zero(game.num_profiles());
  for (int i = 0; i < game.num_players(); ++i) {
    const TensorShape& shape = game.shape();
    const Index n = shape.dim(i);
    const Index outer = shape.outer(i);
    const Index inner = shape.inner(i);
    for (Index o = 0; o < outer; ++o) {
      for (Index a = 0; a < n; ++a) {
        log_joint.segment((o * n + a) * inner, inner).array() +=
            std::log(targets[i][a]);
      }
    }
  }
  return log_joint;
}

VectorXd CceDualLogit(const Game& game, const std::vector<VectorXd>& alphas,
                      const VectorXd& target_log_joint) {
  if (static_cast<int>(alphas.size()) != game.num_players()) {
    throw DimensionError("need one dual vector per player");
  }
  if (target_log_joint.size() != game.num_profiles()) {
    throw DimensionError("target log joint has the wrong size");
  }
  VectorXd logits = target_log_joint;
  for (int i = 0; i < game.num_players(); ++i) {
    if (alphas[i].size() != game.num_actions(i)) {
      throw DimensionError("dual size differs from action count");
    }
    if (!alphas[i].allFinite() || (alphas[i].array() < 0.0).any()) {
      throw ParameterError("dual variables must be finite and nonnegative");
    }
    const VectorXd& u = game.utility(i);
    // sum_a' alpha(a') u(a', a_{-i}) - (sum alpha) u(a)
    logits -= BroadcastAlong(ContractAxis(u, game.shape(), i, alphas[i]),
                             game.shape(), i) -
              alphas[i].sum() * u;
  }
  return logits;
}

double CceDualLoss(const Game& game, const std::vector<VectorXd>& thetas,
                   const VectorXd& target_log_joint,
                   std::vector<VectorXd>* gradient) {
  if (static_cast<int>(thetas.size()) != game.num_players()) {
    throw DimensionError("need one dual vector per player");
  }
  std::vector<VectorXd> alphas;
  for (const VectorXd& t : thetas) alphas.push_back(t.unaryExpr(&Softplus));
  const VectorXd logits = CceDualLogit(game, alphas, target_log_joint);
  const double loss = LogSumExp(logits);
  if (gradient != nullptr) {
    const VectorXd joint = (logits.array() - loss).exp();
    const Marginals regrets = JointRegrets(game, joint);
    gradient->clear();
    for (int i = 0; i < game.num_players(); ++i) {
      gradient->push_back(
          -(regrets[i].array() * thetas[i].unaryExpr(&Sigmoid).array())
               .matrix());
    }
  }
  return loss;
}

EquilibriumResult SolveMreCce(const Game& game, const CCEConfig& config) {
  config.Validate(game);
  const VectorXd log_target = config.target_log_joint.size() == 0
                                  ? UniformLogJoint(game)
                                  : config.target_log_joint;
  const std::vector<Index> offsets = Offsets(game);
  VectorXd theta = VectorXd::Constant(offsets.back(), config.initial_dual);
  internal::Adam adam(theta.size(), config.learning_rate);

  EquilibriumResult result;
  VectorXd joint;
  Marginals alphas;
  int step = 0;
  for (;; ++step) {
    alphas = SplitSoftplus(theta, offsets);
    const VectorXd logits = CceDualLogit(game, alphas, log_target);
    const double loss = LogSumExp(logits);
    joint = (logits.array() - loss).exp();
    const Marginals regrets = JointRegrets(game, joint);
    if (step % config.check_interval == 0) {
      double max_regret = -std::numeric_limits<double>::infinity();
      double slack = 0.0;
      double exploitability = 0.0;
      for (int i = 0; i < game.num_players(); ++i) {
        max_regret = std::max(max_regret, regrets[i].maxCoeff());
        exploitability += std::max(0.0, regrets[i].maxCoeff());
        slack += alphas[i].dot(regrets[i]);
      }
      result.trace.push_back({step, 0.0, loss, exploitability, {}});
      if (max_regret <= config.epsilon_cce &&
          std::abs(slack) <= config.epsilon_cce) {
        result.converged = true;
        break;
      }
    }
    if (step >= config.max_steps) break;
    VectorXd grad(theta.size());
    for (int i = 0; i < game.num_players(); ++i) {
      const Index n = game.num_actions(i);
      grad.segment(offsets[i], n) =
          -(regrets[i].array() *
            theta.segment(offsets[i], n).unaryExpr(&Sigmoid).array())
               .matrix();
    }
    adam.Step(theta, grad);
  }
  result.profile = JointDistribution(joint / joint.sum(), game.shape());
  result.exploitability = Exploitability(game, result.joint());
  result.duals = alphas;
  result.steps = step;
  if (!result.converged) {
    throw SolverConvergenceError(
        "CCE solver hit max_steps with exploitability " +
            std::to_string(result.exploitability),
        std::move(result));
  }
  return result;
}

VectorXd RatingVector(const Game& game, const ProductProfile& profile) {
  const std::vector<Index> offsets = Offsets(game);
  VectorXd ratings(offsets.back());
  for (int i = 0; i < game.num_players(); ++i) {
    ratings.segment(offsets[i], game.num_actions(i)) =
        Regrets(game, profile, i);
  }
  return ratings;
}

EnumerationResult EnumerateNes(const Game& game,
                               const EnumerationConfig& config) {
  if (config.count < 1) throw ParameterError("count must be >= 1");
  if (!(config.smoothing_start > 0.0) || !(config.smoothing_end > 0.0) ||
      !(config.learning_rate > 0.0) || config.max_steps < 1 ||
      config.replicas < 0 || !(config.diversity_weight >= 0.0)) {
    throw ParameterError("invalid enumeration configuration");
  }
  EquilibriumResult lle;
  try {
    lle = SolveLle(game, config.lle);
  } catch (const SolverConvergenceError& e) {
    lle = e.partial();
  }
  // The annealed path stops at tau_terminal, a small but finite distance
  // from the limiting equilibrium. Refine it well below epsilon so that its
  // rating vector is comparable with the replicas' at dedup_distance.
  ProductProfile first = lle.product();
  const double polish_target = 1e-2 * config.epsilon;
  if (lle.exploitability > polish_target) {
    first = PolishNe(game, first, std::max(lle.final_tau, config.smoothing_end),
                     config.smoothing_end, polish_target, config.max_steps,
                     config.learning_rate);
  }
  const int replicas =
      config.replicas > 0 ? config.replicas : 4 * config.count;
  const int n = game.num_players();
  const std::vector<Index> offsets = Offsets(game);
  const Marginals logt = LogOf(UniformTargets(game));
  const VectorXd anchor = RatingVector(game, first);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::vector<VectorXd> thetas;
  std::vector<internal::Adam> optimizers;
  for (int k = 0; k < replicas; ++k) {
    thetas.push_back(VectorXd::NullaryExpr(offsets.back(),
                                           [&] { return normal(rng); }));
    optimizers.emplace_back(offsets.back(), config.learning_rate);
  }

  const int steps = config.max_steps;
  const int fade_start = static_cast<int>(0.8 * steps);
  std::vector<Marginals> xs(replicas), logxs(replicas), gs(replicas);
  std::vector<VectorXd> ratings(replicas);
  for (int step = 0; step < steps; ++step) {
    const double frac = static_cast<double>(step) / std::max(1, steps - 1);
    const double tau = config.smoothing_start *
                       std::pow(config.smoothing_end / config.smoothing_start,
                                frac);
    const double weight =
        step < fade_start
            ? config.diversity_weight
            : config.diversity_weight * (steps - step) /
                  std::max(1, steps - fade_start);
    for (int k = 0; k < replicas; ++k) {
      LogitProfile(thetas[k], offsets, logt, &xs[k], &logxs[k]);
      gs[k] = Deviations(game, xs[k]);
      ratings[k].resize(offsets.back());
      for (int i = 0; i < n; ++i) {
        ratings[k].segment(offsets[i], xs[k][i].size()) =
            gs[k][i].array() - xs[k][i].dot(gs[k][i]);
      }
    }
    for (int k = 0; k < replicas; ++k) {
      const Marginals& x = xs[k];
      Marginals grad_x = QreGradientFrom(game, x, logxs[k], gs[k], tau, logt,
                                         /*with_kl=*/false);
      if (weight > 0.0) {
        // Repulsion: maximise the mean squared rating distance to the other
        // replicas and the LLE. Its gradient in x is a vector-Jacobian
        // product of the ratings r_i = g_i - (x_i.g_i) 1 with c = dR/dr.
        VectorXd c = ratings[k] - anchor;
        for (int l = 0; l < replicas; ++l) {
          if (l != k) c += ratings[k] - ratings[l];
        }
        c *= -2.0 * weight / replicas;
        Marginals d;
        for (int i = 0; i < n; ++i) {
          d.push_back(c.segment(offsets[i], x[i].size()));
        }
        const Marginals cross = CrossTerms(game, x, d);
        // The -(1.d_i) u_i(x) part, differentiated in every x_j.
        Marginals mass;
        for (int i = 0; i < n; ++i) {
          mass.push_back(d[i].sum() * x[i]);
        }
        const Marginals mass_cross = CrossTerms(game, x, mass);
        for (int j = 0; j < n; ++j) {
          grad_x[j] += cross[j] - mass_cross[j] - d[j].sum() * gs[k][j];
        }
      }
      VectorXd grad = VectorXd::Zero(offsets.back());
      AccumulateLogitGradient(x, grad_x, offsets, &grad);
      optimizers[k].Step(thetas[k], grad);
    }
  }

  struct Candidate {
    double exploitability;
    ProductProfile profile;
  };
  std::vector<Candidate> candidates;
  for (int k = 0; k < replicas; ++k) {
    Marginals x, logx;
    LogitProfile(thetas[k], offsets, logt, &x, &logx);
    ProductProfile profile = Renormalized(x);
    const double e = Exploitability(game, profile);
    if (e <= config.epsilon) candidates.push_back({e, std::move(profile)});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.exploitability < b.exploitability;
                   });

  EnumerationResult result;
  result.equilibria.push_back(first);
  result.exploitabilities.push_back(Exploitability(game, first));
  std::vector<VectorXd> kept = {anchor};
  for (const Candidate& c : candidates) {
    if (static_cast<int>(result.equilibria.size()) >= config.count) break;
    const VectorXd r = RatingVector(game, c.profile);
    const bool fresh = std::all_of(kept.begin(), kept.end(), [&](const auto& q) {
      return (r - q).norm() >= config.dedup_distance;
    });
    if (!fresh) continue;
    kept.push_back(r);
    result.equilibria.push_back(c.profile);
    result.exploitabilities.push_back(c.exploitability);
  }
  result.complete =
      static_cast<int>(result.equilibria.size()) >= config.count;
  double min_distance = 0.0;
  if (kept.size() > 1) {
    min_distance = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < kept.size(); ++a) {
      for (size_t b = a + 1; b < kept.size(); ++b) {
        min_distance = std::min(min_distance, (kept[a] - kept[b]).norm());
      }
    }
  }
  result.min_rating_distance = min_distance;
  return result;
}

RiskDominanceResult RiskDominanceBeliefs(
    const Game& game, const std::vector<ProductProfile>& equilibria,
    double eta, int iterations) {
  if (equilibria.empty()) throw ParameterError("need at least one equilibrium");
  if (!(eta > 0.0) || iterations < 0) {
    throw ParameterError("eta must be positive and iterations >= 0");
  }
  const int n = game.num_players();
  const Index count = static_cast<Index>(equilibria.size());
  for (const ProductProfile& e : equilibria) {
    if (e.num_players() != n) throw DimensionError("profile does not match game");
    for (int i = 0; i < n; ++i) {
      if (e.marginal(i).size() != game.num_actions(i)) {
        throw DimensionError("profile does not match game");
      }
    }
  }
  RiskDominanceResult result;
  result.priors.assign(n, VectorXd::Constant(count, 1.0 / count));
  // payoffs(k, i) = x_i^k . g_i(m) with m_j the prior-weighted mixture.
  auto payoff_table = [&](const Marginals& priors) {
    Marginals mixtures;
    for (int j = 0; j < n; ++j) {
      VectorXd m = VectorXd::Zero(game.num_actions(j));
      for (Index k = 0; k < count; ++k) {
        m += priors[j][k] * equilibria[k].marginal(j);
      }
      mixtures.push_back(std::move(m));
    }
    Eigen::MatrixXd table(count, n);
    for (int i = 0; i < n; ++i) {
      const VectorXd g =
          ContractAllBut(game.utility(i), game.shape(), mixtures, i);
      for (Index k = 0; k < count; ++k) {
        table(k, i) = equilibria[k].marginal(i).dot(g);
      }
    }
    return table;
  };
  result.initial_payoffs = payoff_table(result.priors);
  for (int t = 0; t < iterations; ++t) {
    const Eigen::MatrixXd table = payoff_table(result.priors);
    for (int i = 0; i < n; ++i) {
      result.priors[i] =
          Softmax(result.priors[i].array().log().matrix() + eta * table.col(i));
    }
  }
  result.payoffs = payoff_table(result.priors);
  return result;
}

}  // namespace eqrate
