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

// Ratings, rankings and rating decompositions.
//
// The rating of an action is its regret against a profile x,
// regret_i(a, x) = u_i(a, x_{-i}) - u_i(x). At an equilibrium every rating is
// <= 0 and actions in the support are rated 0.

#ifndef EQRATE_RATINGS_H_
#define EQRATE_RATINGS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Dense"
#include "eqrate/game.h"

namespace eqrate {

enum class RatingMethod { kElo, kNe, kCce, kNeShannon, kCceShannon };

// "ELO", "NE", "CCE", "NE-shannon", "CCE-shannon".
std::string_view MethodTag(RatingMethod method);
RatingMethod ParseMethodTag(std::string_view tag);

inline constexpr double kDefaultTieTolerance = 1e-4;

struct PlayerRatings {
  std::string player;
  std::vector<std::string> labels;
  Eigen::VectorXd ratings;
  // Marginal equilibrium mass per action; empty for Elo.
  Eigen::VectorXd masses;
  // 1 = best. Tied actions share the rank of the group, and the next group
  // skips past them (1, 1, 3).
  std::vector<int> ranks;

  // Action indices by rank, alphabetical within a tied group.
  std::vector<int> DisplayOrder() const;
};

struct RatingReport {
  RatingMethod method = RatingMethod::kNe;
  double tie_tolerance = kDefaultTieTolerance;
  std::vector<PlayerRatings> players;
};

// Ranks by descending rating. Ratings chained by gaps <= tolerance form one
// tied group.
std::vector<int> RankWithTies(const Eigen::VectorXd& ratings,
                              double tolerance = kDefaultTieTolerance);

RatingReport Rate(const Game& game, const ProductProfile& profile,
                  RatingMethod method,
                  double tie_tolerance = kDefaultTieTolerance);
RatingReport Rate(const Game& game, const JointDistribution& profile,
                  RatingMethod method,
                  double tie_tolerance = kDefaultTieTolerance);

// Wraps externally computed Elo ratings in a single-player report.
RatingReport EloReport(const std::string& player,
                       const std::vector<std::string>& labels,
                       const Eigen::VectorXd& elo,
                       double tie_tolerance = kDefaultTieTolerance);

struct DecompositionTable {
  int player = 0;
  int action = 0;
  int co_player = 1;
  std::vector<std::string> co_labels;
  // delta(a'_i, a_j, x) for every action a_j of the co-player.
  Eigen::VectorXd contributions;
  double rating = 0.0;
  // Family of every co-player action (empty without a grouping) and the
  // per-family sums in order of first appearance.
  std::vector<std::string> families;
  std::vector<std::pair<std::string, double>> family_sums;
};

// delta(a'_i, a_j, x) = sum_{a : a_j fixed} x(a) [u_i(a'_i, a_{-i}) - u_i(a)].
// Summing over a_j recovers regret_i(a'_i, x). Actions absent from
// `grouping` form their own family.
DecompositionTable Decompose(
    const Game& game, const JointDistribution& profile, int player, int action,
    int co_player, const std::map<std::string, std::string>* grouping = nullptr);

inline constexpr double kEloScale = 173.71779276130073;  // 400 / ln 10

// Bradley-Terry maximum likelihood on expected scores w_ij (w_ij + w_ji = 1),
// with an L2 penalty reg * ||r||^2, centred to mean 0 and returned in Elo
// points.
Eigen::VectorXd EloRatings(const Eigen::MatrixXd& win_matrix,
                           double reg = 1e-6);

// (1/M^2) sum_{i,j} |u_king(prompt, i, j)| on a (prompt, king, rebel) game.
double Separability(const Game& koth, int prompt);
Eigen::VectorXd Separabilities(const Game& koth);

}  // namespace eqrate

#endif  // EQRATE_RATINGS_H_
