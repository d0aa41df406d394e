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

#include "eqrate/ratings.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "eqrate/errors.h"

namespace eqrate {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double Sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double LogSigmoid(double t) {
  return t >= 0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
}

bool IsEquilibriumMethod(RatingMethod method) {
  return method != RatingMethod::kElo;
}

template <typename Profile, typename Marginal>
RatingReport RateImpl(const Game& game, const Profile& profile,
                      RatingMethod method, double tie_tolerance,
                      Marginal marginal) {
  if (!IsEquilibriumMethod(method)) {
    throw ParameterError("ELO ratings do not come from a profile");
  }
  if (!(tie_tolerance >= 0.0)) throw ParameterError("tie tolerance must be >= 0");
  RatingReport report;
  report.method = method;
  report.tie_tolerance = tie_tolerance;
  for (int i = 0; i < game.num_players(); ++i) {
    PlayerRatings p;
    p.player = game.player_name(i);
    p.labels = game.action_labels(i);
    p.ratings = Regrets(game, profile, i);
    p.masses = marginal(i);
    p.ranks = RankWithTies(p.ratings, tie_tolerance);
    report.players.push_back(std::move(p));
  }
  return report;
}

// Penalised BT log-likelihood, plus a -(sum r)^2 / 2 term pinning the mean.
double EloObjective(const MatrixXd& w, const VectorXd& r, double reg) {
  double f = 0.0;
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      if (i != j) f += w(i, j) * LogSigmoid(r[i] - r[j]);
    }
  }
  return f - reg * r.squaredNorm() - 0.5 * r.sum() * r.sum();
}

}  // namespace

std::string_view MethodTag(RatingMethod method) {
  switch (method) {
    case RatingMethod::kElo:
      return "ELO";
    case RatingMethod::kNe:
      return "NE";
    case RatingMethod::kCce:
      return "CCE";
    case RatingMethod::kNeShannon:
      return "NE-shannon";
    case RatingMethod::kCceShannon:
      return "CCE-shannon";
  }
  return "?";
}

RatingMethod ParseMethodTag(std::string_view tag) {
  for (RatingMethod m :
       {RatingMethod::kElo, RatingMethod::kNe, RatingMethod::kCce,
        RatingMethod::kNeShannon, RatingMethod::kCceShannon}) {
    if (MethodTag(m) == tag) return m;
  }
  throw ParameterError("unknown rating method '" + std::string(tag) + "'");
}

std::vector<int> PlayerRatings::DisplayOrder() const {
  std::vector<int> order(ranks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (ranks[a] != ranks[b]) return ranks[a] < ranks[b];
    return labels[a] < labels[b];
  });
  return order;
}

std::vector<int> RankWithTies(const VectorXd& ratings, double tolerance) {
  const Index n = ratings.size();
  if (!ratings.allFinite()) throw ParameterError("ratings must be finite");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ratings[a] > ratings[b]; });
  std::vector<int> ranks(n);
  int group_rank = 1;
  for (Index k = 0; k < n; ++k) {
    if (k > 0 && ratings[order[k - 1]] - ratings[order[k]] > tolerance) {
      group_rank = static_cast<int>(k) + 1;
    }
    ranks[order[k]] = group_rank;
  }
  return ranks;
}

RatingReport Rate(const Game& game, const ProductProfile& profile,
                  RatingMethod method, double tie_tolerance) {
  return RateImpl(game, profile, method, tie_tolerance,
                  [&](int i) { return profile.marginal(i); });
}

RatingReport Rate(const Game& game, const JointDistribution& profile,
                  RatingMethod method, double tie_tolerance) {
  return RateImpl(game, profile, method, tie_tolerance,
                  [&](int i) { return profile.Marginal(i); });
}

RatingReport EloReport(const std::string& player,
                       const std::vector<std::string>& labels,
                       const VectorXd& elo, double tie_tolerance) {
  if (static_cast<Index>(labels.size()) != elo.size()) {
    throw DimensionError("one Elo rating per label required");
  }
  RatingReport report;
  report.method = RatingMethod::kElo;
  report.tie_tolerance = tie_tolerance;
  PlayerRatings p;
  p.player = player;
  p.labels = labels;
  p.ratings = elo;
  p.ranks = RankWithTies(elo, tie_tolerance);
  report.players.push_back(std::move(p));
  return report;
}

DecompositionTable Decompose(const Game& game, const JointDistribution& profile,
                             int player, int action, int co_player,
                             const std::map<std::string, std::string>* grouping) {
  const int n = game.num_players();
  if (player < 0 || player >= n || co_player < 0 || co_player >= n) {
    throw DimensionError("player index out of range");
  }
  if (player == co_player) {
    throw ParameterError("decomposition needs two distinct players");
  }
  if (action < 0 || action >= game.num_actions(player)) {
    throw DimensionError("action index out of range");
  }
  if (!(profile.shape() == game.shape())) {
    throw DimensionError("profile does not match game");
  }
  const TensorShape& shape = game.shape();
  const VectorXd& u = game.utility(player);
  const VectorXd slice = ContractAxis(
      u, shape, player, VectorXd::Unit(game.num_actions(player), action));
  // x(a) [u_i(a'_i, a_{-i}) - u_i(a)], then summed over everything but a_j.
  const VectorXd weighted =
      profile.joint().cwiseProduct(BroadcastAlong(slice, shape, player) - u);
  std::vector<VectorXd> ones;
  for (int k = 0; k < n; ++k) ones.push_back(VectorXd::Ones(shape.dim(k)));

  DecompositionTable table;
  table.player = player;
  table.action = action;
  table.co_player = co_player;
  table.co_labels = game.action_labels(co_player);
  table.contributions = ContractAllBut(weighted, shape, ones, co_player);
  table.rating = Regret(game, profile, player, action);
  if (grouping != nullptr) {
    for (Index a = 0; a < table.contributions.size(); ++a) {
      const std::string& label = table.co_labels[a];
      const auto it = grouping->find(label);
      const std::string family = it == grouping->end() ? label : it->second;
      table.families.push_back(family);
      auto sum = std::find_if(
          table.family_sums.begin(), table.family_sums.end(),
          [&](const auto& entry) { return entry.first == family; });
      if (sum == table.family_sums.end()) {
        table.family_sums.emplace_back(family, table.contributions[a]);
      } else {
        sum->second += table.contributions[a];
      }
    }
  }
  return table;
}

VectorXd EloRatings(const MatrixXd& w, double reg) {
  const Index n = w.rows();
  if (w.cols() != n || n == 0) throw DimensionError("win matrix must be square");
  if (!(reg > 0.0)) throw ParameterError("regularisation must be positive");
  if (!w.allFinite() || w.minCoeff() < 0.0 || w.maxCoeff() > 1.0) {
    throw ParameterError("win matrix entries must lie in [0, 1]");
  }
  for (Index i = 0; i < n; ++i) {
    if (std::abs(w(i, i) - 0.5) > 1e-6) {
      throw ParameterError("win matrix diagonal must be 0.5");
    }
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(w(i, j) + w(j, i) - 1.0) > 1e-6) {
        throw ParameterError("win matrix must satisfy w_ij + w_ji = 1");
      }
    }
  }
  // Damped Newton on a strictly concave objective.
  VectorXd r = VectorXd::Zero(n);
  double f = EloObjective(w, r, reg);
  for (int iter = 0; iter < 200; ++iter) {
    VectorXd grad = -2.0 * reg * r - VectorXd::Constant(n, r.sum());
    MatrixXd hess = MatrixXd::Constant(n, n, 1.0);
    hess.diagonal().array() += 2.0 * reg;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double s = Sigmoid(r[i] - r[j]);
        grad[i] += w(i, j) - s;
        // Each unordered pair contributes s(1-s) to the Laplacian, once from
        // (i,j) and once from (j,i); halve to count it once.
        const double c = 0.5 * s * (1.0 - s);
        hess(i, i) += c;
        hess(j, j) += c;
        hess(i, j) -= c;
        hess(j, i) -= c;
      }
    }
    const VectorXd step = hess.ldlt().solve(grad);
    double t = 1.0;
    VectorXd next = r + step;
    double f_next = EloObjective(w, next, reg);
    while (f_next < f && t > 1e-10) {
      t *= 0.5;
      next = r + t * step;
      f_next = EloObjective(w, next, reg);
    }
    const double moved = (next - r).lpNorm<Eigen::Infinity>();
    r = next;
    f = f_next;
    if (moved < 1e-12) break;
  }
  r.array() -= r.mean();
  return kEloScale * r;
}

double Separability(const Game& koth, int prompt) {
  if (koth.num_players() != 3) {
    throw DimensionError("separability needs a (prompt, king, rebel) game");
  }
  if (prompt < 0 || prompt >= koth.num_actions(0)) {
    throw DimensionError("prompt index out of range");
  }
  const Index block = koth.shape().inner(0);
  return koth.utility(1).segment(prompt * block, block).cwiseAbs().mean();
}

VectorXd Separabilities(const Game& koth) {
  if (koth.num_players() != 3) {
    throw DimensionError("separability needs a (prompt, king, rebel) game");
  }
  VectorXd s(koth.num_actions(0));
  for (int p = 0; p < s.size(); ++p) s[p] = Separability(koth, p);
  return s;
}

}  // namespace eqrate
