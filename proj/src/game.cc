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

#include "eqrate/game.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "eqrate/errors.h"

namespace eqrate {
namespace {

using Eigen::Index;
using Eigen::VectorXd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

void CheckAxis(const TensorShape& shape, int axis) {
  if (axis < 0 || axis >= shape.rank()) {
    throw DimensionError("axis " + std::to_string(axis) +
                         " out of range for rank " +
                         std::to_string(shape.rank()));
  }
}

void CheckTensor(const VectorXd& tensor, const TensorShape& shape) {
  if (tensor.size() != shape.size()) {
    throw DimensionError("tensor has " + std::to_string(tensor.size()) +
                         " entries, shape requires " +
                         std::to_string(shape.size()));
  }
}

void CheckPlayer(const Game& game, int player) {
  if (player < 0 || player >= game.num_players()) {
    throw DimensionError("player " + std::to_string(player) +
                         " out of range");
  }
}

void CheckProfile(const Game& game, const ProductProfile& profile) {
  if (profile.num_players() != game.num_players()) {
    throw DimensionError("profile has " +
                         std::to_string(profile.num_players()) +
                         " players, game has " +
                         std::to_string(game.num_players()));
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (profile.marginal(i).size() != game.num_actions(i)) {
      throw DimensionError("marginal of player " + std::to_string(i) +
                           " has wrong length");
    }
  }
}

void CheckProfile(const Game& game, const JointDistribution& profile) {
  if (!(profile.shape() == game.shape())) {
    throw DimensionError("joint distribution shape does not match game");
  }
}

}  // namespace

TensorShape::TensorShape(std::vector<int> dims) : dims_(std::move(dims)) {
  for (int d : dims_) {
    if (d < 1) throw DimensionError("tensor dimensions must be >= 1");
    size_ *= d;
  }
}

Index TensorShape::inner(int axis) const {
  Index n = 1;
  for (int k = axis + 1; k < rank(); ++k) n *= dims_[k];
  return n;
}

Index TensorShape::outer(int axis) const {
  Index n = 1;
  for (int k = 0; k < axis; ++k) n *= dims_[k];
  return n;
}

TensorShape TensorShape::Without(int axis) const {
  std::vector<int> dims = dims_;
  dims.erase(dims.begin() + axis);
  return TensorShape(std::move(dims));
}

Index TensorShape::Ravel(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != rank()) {
    throw DimensionError("index rank mismatch");
  }
  Index flat = 0;
  for (int k = 0; k < rank(); ++k) {
    if (index[k] < 0 || index[k] >= dims_[k]) {
      throw DimensionError("index out of range on axis " + std::to_string(k));
    }
    flat = flat * dims_[k] + index[k];
  }
  return flat;
}

std::vector<int> TensorShape::Unravel(Index flat) const {
  std::vector<int> index(rank());
  for (int k = rank() - 1; k >= 0; --k) {
    index[k] = static_cast<int>(flat % dims_[k]);
    flat /= dims_[k];
  }
  return index;
}

VectorXd ContractAxis(const VectorXd& tensor, const TensorShape& shape,
                      int axis, const VectorXd& weights) {
  CheckAxis(shape, axis);
  CheckTensor(tensor, shape);
  const Index n = shape.dim(axis);
  if (weights.size() != n) throw DimensionError("weights length mismatch");
  const Index outer = shape.outer(axis);
  const Index inner = shape.inner(axis);
  VectorXd result(outer * inner);
  if (inner == 1) {
    result.noalias() = RowMajorMap(tensor.data(), outer, n) * weights;
    return result;
  }
  for (Index o = 0; o < outer; ++o) {
    RowMajorMap block(tensor.data() + o * n * inner, n, inner);
    result.segment(o * inner, inner).noalias() = block.transpose() * weights;
  }
  return result;
}

VectorXd ContractAllBut(const VectorXd& tensor, const TensorShape& shape,
                        std::span<const VectorXd> vectors, int keep) {
  CheckAxis(shape, keep);
  if (static_cast<int>(vectors.size()) != shape.rank()) {
    throw DimensionError("need one vector per axis");
  }
  if (shape.rank() == 1) return tensor;
  // Contract trailing axes first so leading axis numbers stay valid.
  const int first = keep == shape.rank() - 1 ? keep - 1 : shape.rank() - 1;
  VectorXd current = ContractAxis(tensor, shape, first, vectors[first]);
  TensorShape current_shape = shape.Without(first);
  for (int k = first - 1; k > keep; --k) {
    current = ContractAxis(current, current_shape, k, vectors[k]);
    current_shape = current_shape.Without(k);
  }
  for (int k = std::min(keep, first) - 1; k >= 0; --k) {
    current = ContractAxis(current, current_shape, k, vectors[k]);
    current_shape = current_shape.Without(k);
  }
  return current;
}

double ContractAll(const VectorXd& tensor, const TensorShape& shape,
                   std::span<const VectorXd> vectors) {
  const int last = shape.rank() - 1;
  return ContractAllBut(tensor, shape, vectors, last).dot(vectors[last]);
}

VectorXd SumAxis(const VectorXd& tensor, const TensorShape& shape, int axis) {
  return ContractAxis(tensor, shape, axis,
                      VectorXd::Ones(shape.dim(axis)));
}

VectorXd BroadcastAlong(const VectorXd& reduced, const TensorShape& shape,
                        int axis) {
  CheckAxis(shape, axis);
  const Index n = shape.dim(axis);
  const Index outer = shape.outer(axis);
  const Index inner = shape.inner(axis);
  if (reduced.size() != outer * inner) {
    throw DimensionError("reduced tensor has wrong size");
  }
  VectorXd result(shape.size());
  for (Index o = 0; o < outer; ++o) {
    for (Index a = 0; a < n; ++a) {
      result.segment((o * n + a) * inner, inner) =
          reduced.segment(o * inner, inner);
    }
  }
  return result;
}

VectorXd ContractComplement(const VectorXd& tensor, const TensorShape& shape,
                            int axis, const VectorXd& weights) {
  CheckAxis(shape, axis);
  CheckTensor(tensor, shape);
  const Index n = shape.dim(axis);
  const Index outer = shape.outer(axis);
  const Index inner = shape.inner(axis);
  if (weights.size() != outer * inner) {
    throw DimensionError("complement weights have wrong size");
  }
  if (inner == 1) {
    return RowMajorMap(tensor.data(), outer, n).transpose() * weights;
  }
  VectorXd result = VectorXd::Zero(n);
  for (Index o = 0; o < outer; ++o) {
    RowMajorMap block(tensor.data() + o * n * inner, n, inner);
    result.noalias() += block * weights.segment(o * inner, inner);
  }
  return result;
}

Game::Game(std::vector<std::string> player_names,
           std::vector<std::vector<std::string>> action_labels,
           std::vector<VectorXd> utilities)
    : player_names_(std::move(player_names)),
      action_labels_(std::move(action_labels)),
      utilities_(std::move(utilities)) {
  const int n = static_cast<int>(player_names_.size());
  if (n < 1) throw DimensionError("a game needs at least one player");
  if (static_cast<int>(action_labels_.size()) != n ||
      static_cast<int>(utilities_.size()) != n) {
    throw DimensionError("players, action lists and utilities disagree");
  }
  std::vector<int> dims;
  for (int i = 0; i < n; ++i) {
    const auto& labels = action_labels_[i];
    if (labels.empty()) {
      throw DimensionError("player " + player_names_[i] + " has no actions");
    }
    std::set<std::string> unique(labels.begin(), labels.end());
    if (unique.size() != labels.size()) {
      throw ParameterError("duplicate action label for player " +
                           player_names_[i]);
    }
    dims.push_back(static_cast<int>(labels.size()));
  }
  shape_ = TensorShape(std::move(dims));
  for (int i = 0; i < n; ++i) {
    if (utilities_[i].size() != shape_.size()) {
      throw DimensionError("utility tensor of player " + player_names_[i] +
                           " does not match the action sets");
    }
    if (!utilities_[i].allFinite()) {
      throw ParameterError("utility tensor of player " + player_names_[i] +
                           " contains non-finite values");
    }
  }
}

int Game::ActionIndex(int player, std::string_view label) const {
  CheckPlayer(*this, player);
  const auto& labels = action_labels_[player];
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw ParameterError("unknown action '" + std::string(label) +
                         "' for player " + player_names_[player]);
  }
  return static_cast<int>(it - labels.begin());
}

double Game::Payoff(int player, std::span<const int> profile) const {
  CheckPlayer(*this, player);
  return utilities_[player][shape_.Ravel(profile)];
}

void CheckSimplex(const VectorXd& x, double tolerance, std::string_view what) {
  if (x.size() == 0) throw DimensionError(std::string(what) + " is empty");
  if (!x.allFinite() || x.minCoeff() < 0.0) {
    throw ParameterError(std::string(what) +
                         " must be finite and nonnegative");
  }
  if (std::abs(x.sum() - 1.0) > tolerance) {
    throw ParameterError(std::string(what) + " does not sum to 1");
  }
}

ProductProfile::ProductProfile(std::vector<VectorXd> marginals)
    : marginals_(std::move(marginals)) {
  for (size_t i = 0; i < marginals_.size(); ++i) {
    CheckSimplex(marginals_[i], kSimplexTolerance,
                 "marginal of player " + std::to_string(i));
  }
}

ProductProfile ProductProfile::Uniform(const Game& game) {
  std::vector<VectorXd> marginals;
  for (int i = 0; i < game.num_players(); ++i) {
    const int n = game.num_actions(i);
    marginals.push_back(VectorXd::Constant(n, 1.0 / n));
  }
  return ProductProfile(std::move(marginals));
}

ProductProfile ProductProfile::Pure(const Game& game,
                                    std::span<const int> actions) {
  if (static_cast<int>(actions.size()) != game.num_players()) {
    throw DimensionError("need one action per player");
  }
  std::vector<VectorXd> marginals;
  for (int i = 0; i < game.num_players(); ++i) {
    if (actions[i] < 0 || actions[i] >= game.num_actions(i)) {
      throw DimensionError("pure action out of range");
    }
    VectorXd x = VectorXd::Zero(game.num_actions(i));
    x[actions[i]] = 1.0;
    marginals.push_back(std::move(x));
  }
  return ProductProfile(std::move(marginals));
}

JointDistribution::JointDistribution(VectorXd joint, TensorShape shape)
    : joint_(std::move(joint)), shape_(std::move(shape)) {
  CheckTensor(joint_, shape_);
  CheckSimplex(joint_, kSimplexTolerance, "joint distribution");
}

JointDistribution JointDistribution::FromProduct(
    const ProductProfile& profile) {
  std::vector<int> dims;
  for (const auto& m : profile.marginals()) {
    dims.push_back(static_cast<int>(m.size()));
  }
  TensorShape shape(dims);
  // Kronecker product, leading axis outermost.
  VectorXd joint = VectorXd::Ones(1);
  for (const auto& m : profile.marginals()) {
    VectorXd next(joint.size() * m.size());
    for (Index o = 0; o < joint.size(); ++o) {
      next.segment(o * m.size(), m.size()) = joint[o] * m;
    }
    joint = std::move(next);
  }
  return JointDistribution(std::move(joint), std::move(shape));
}

VectorXd JointDistribution::Marginal(int player) const {
  CheckAxis(shape_, player);
  std::vector<VectorXd> ones;
  for (int d : shape_.dims()) ones.push_back(VectorXd::Ones(d));
  return ContractAllBut(joint_, shape_, ones, player);
}

double ExpectedUtility(const Game& game, const ProductProfile& profile,
                       int player) {
  CheckPlayer(game, player);
  CheckProfile(game, profile);
  return ContractAll(game.utility(player), game.shape(), profile.marginals());
}

double ExpectedUtility(const Game& game, const JointDistribution& profile,
                       int player) {
  CheckPlayer(game, player);
  CheckProfile(game, profile);
  return game.utility(player).dot(profile.joint());
}

VectorXd DeviationPayoff(const Game& game, const ProductProfile& profile,
                         int player) {
  CheckPlayer(game, player);
  CheckProfile(game, profile);
  return ContractAllBut(game.utility(player), game.shape(),
                        profile.marginals(), player);
}

VectorXd DeviationPayoff(const Game& game, const JointDistribution& profile,
                         int player) {
  CheckPlayer(game, player);
  CheckProfile(game, profile);
  const VectorXd others = SumAxis(profile.joint(), game.shape(), player);
  return ContractComplement(game.utility(player), game.shape(), player,
                            others);
}

namespace {

template <typename Profile>
VectorXd RegretsImpl(const Game& game, const Profile& profile, int player) {
  const VectorXd deviation = DeviationPayoff(game, profile, player);
  return deviation.array() - ExpectedUtility(game, profile, player);
}

template <typename Profile>
double ExploitabilityImpl(const Game& game, const Profile& profile) {
  double total = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    total += std::max(0.0, RegretsImpl(game, profile, i).maxCoeff());
  }
  return total;
}

}  // namespace

VectorXd Regrets(const Game& game, const ProductProfile& profile, int player) {
  return RegretsImpl(game, profile, player);
}

VectorXd Regrets(const Game& game, const JointDistribution& profile,
                 int player) {
  return RegretsImpl(game, profile, player);
}

double Regret(const Game& game, const ProductProfile& profile, int player,
              int action) {
  const VectorXd r = Regrets(game, profile, player);
  if (action < 0 || action >= r.size()) {
    throw DimensionError("action out of range");
  }
  return r[action];
}

double Regret(const Game& game, const JointDistribution& profile, int player,
              int action) {
  const VectorXd r = Regrets(game, profile, player);
  if (action < 0 || action >= r.size()) {
    throw DimensionError("action out of range");
  }
  return r[action];
}

double Exploitability(const Game& game, const ProductProfile& profile) {
  return ExploitabilityImpl(game, profile);
}

double Exploitability(const Game& game, const JointDistribution& profile) {
  return ExploitabilityImpl(game, profile);
}

}  // namespace eqrate
