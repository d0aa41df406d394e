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

#ifndef EQRATE_GAME_H_
#define EQRATE_GAME_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Dense"

namespace eqrate {

// Shape of a dense row-major tensor. Axis k has dims()[k] entries; the last
// axis varies fastest in the flat layout.
class TensorShape {
 public:
  TensorShape() = default;
  explicit TensorShape(std::vector<int> dims);

  int rank() const { return static_cast<int>(dims_.size()); }
  int dim(int axis) const { return dims_[axis]; }
  const std::vector<int>& dims() const { return dims_; }
  Eigen::Index size() const { return size_; }

  // Number of flat entries between consecutive values of `axis`.
  Eigen::Index inner(int axis) const;
  // Product of the dimensions preceding `axis`.
  Eigen::Index outer(int axis) const;

  TensorShape Without(int axis) const;
  Eigen::Index Ravel(std::span<const int> index) const;
  std::vector<int> Unravel(Eigen::Index flat) const;

  bool operator==(const TensorShape& other) const = default;

 private:
  std::vector<int> dims_;
  Eigen::Index size_ = 1;
};

// Tensor algebra over flat row-major storage. These are the only primitives
// the solvers need; each is a sequence of matrix-vector products over Eigen
// maps and costs O(shape.size()).

// Contracts `axis` against `weights`; the result has shape.Without(axis).
Eigen::VectorXd ContractAxis(const Eigen::VectorXd& tensor,
                             const TensorShape& shape, int axis,
                             const Eigen::VectorXd& weights);

// Contracts every axis except `keep` against vectors[k]. vectors[keep] is
// ignored.
Eigen::VectorXd ContractAllBut(const Eigen::VectorXd& tensor,
                               const TensorShape& shape,
                               std::span<const Eigen::VectorXd> vectors,
                               int keep);

// Full contraction against one vector per axis.
double ContractAll(const Eigen::VectorXd& tensor, const TensorShape& shape,
                   std::span<const Eigen::VectorXd> vectors);

// Sums out `axis`.
Eigen::VectorXd SumAxis(const Eigen::VectorXd& tensor, const TensorShape& shape,
                        int axis);

// Inverse of SumAxis in layout: repeats `reduced` (shape.Without(axis)) along
// `axis`.
Eigen::VectorXd BroadcastAlong(const Eigen::VectorXd& reduced,
                               const TensorShape& shape, int axis);

// For every a'_i, sum over a_{-i} of weights(a_{-i}) * tensor(a'_i, a_{-i}),
// with `weights` laid out as shape.Without(axis).
Eigen::VectorXd ContractComplement(const Eigen::VectorXd& tensor,
                                   const TensorShape& shape, int axis,
                                   const Eigen::VectorXd& weights);

// An N-player normal-form game with dense payoff tensors, one per player.
// Immutable once built.
class Game {
 public:
  Game(std::vector<std::string> player_names,
       std::vector<std::vector<std::string>> action_labels,
       std::vector<Eigen::VectorXd> utilities);

  int num_players() const { return static_cast<int>(player_names_.size()); }
  int num_actions(int player) const { return shape_.dim(player); }
  const TensorShape& shape() const { return shape_; }
  Eigen::Index num_profiles() const { return shape_.size(); }

  const std::string& player_name(int player) const {
    return player_names_[player];
  }
  const std::vector<std::string>& player_names() const {
    return player_names_;
  }
  const std::vector<std::string>& action_labels(int player) const {
    return action_labels_[player];
  }
  const Eigen::VectorXd& utility(int player) const {
    return utilities_[player];
  }

  // Index of `label` in the player's action list; throws ParameterError if
  // absent.
  int ActionIndex(int player, std::string_view label) const;

  // Payoff to `player` at a pure joint action.
  double Payoff(int player, std::span<const int> profile) const;

 private:
  std::vector<std::string> player_names_;
  std::vector<std::vector<std::string>> action_labels_;
  std::vector<Eigen::VectorXd> utilities_;
  TensorShape shape_;
};

// Independent per-player mixed strategies.
class ProductProfile {
 public:
  explicit ProductProfile(std::vector<Eigen::VectorXd> marginals);

  static ProductProfile Uniform(const Game& game);
  // Pure profile placing all mass on `actions`.
  static ProductProfile Pure(const Game& game, std::span<const int> actions);

  int num_players() const { return static_cast<int>(marginals_.size()); }
  const Eigen::VectorXd& marginal(int player) const {
    return marginals_[player];
  }
  const std::vector<Eigen::VectorXd>& marginals() const { return marginals_; }

 private:
  std::vector<Eigen::VectorXd> marginals_;
};

// A probability tensor over joint actions.
class JointDistribution {
 public:
  JointDistribution(Eigen::VectorXd joint, TensorShape shape);

  static JointDistribution FromProduct(const ProductProfile& profile);

  const Eigen::VectorXd& joint() const { return joint_; }
  const TensorShape& shape() const { return shape_; }
  Eigen::VectorXd Marginal(int player) const;

 private:
  Eigen::VectorXd joint_;
  TensorShape shape_;
};

// Tolerance for simplex membership checks on profiles.
inline constexpr double kSimplexTolerance = 1e-9;

void CheckSimplex(const Eigen::VectorXd& x, double tolerance,
                  std::string_view what);

// u_i(x).
double ExpectedUtility(const Game& game, const ProductProfile& profile,
                       int player);
double ExpectedUtility(const Game& game, const JointDistribution& profile,
                       int player);

// u_i(a'_i, x_{-i}) for every pure a'_i.
Eigen::VectorXd DeviationPayoff(const Game& game, const ProductProfile& profile,
                                int player);
Eigen::VectorXd DeviationPayoff(const Game& game,
                                const JointDistribution& profile, int player);

// regret_i(a_i, x) = u_i(a_i, x_{-i}) - u_i(x). This is the action's rating.
double Regret(const Game& game, const ProductProfile& profile, int player,
              int action);
double Regret(const Game& game, const JointDistribution& profile, int player,
              int action);

// Regret of every action of `player`.
Eigen::VectorXd Regrets(const Game& game, const ProductProfile& profile,
                        int player);
Eigen::VectorXd Regrets(const Game& game, const JointDistribution& profile,
                        int player);

// Sum over players of max(0, max_a regret_i(a, x)).
double Exploitability(const Game& game, const ProductProfile& profile);
double Exploitability(const Game& game, const JointDistribution& profile);

}  // namespace eqrate

#endif  // EQRATE_GAME_H_
