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

#include "eqrate/toy_games.h"

#include <algorithm>
#include <utility>
#include <vector>

#include "eqrate/errors.h"

namespace eqrate {

using Eigen::Index;
using Eigen::VectorXd;

Game RockPaperScissors() {
  VectorXd row(9);
  row << 0, -1, 1,
         1, 0, -1,
         -1, 1, 0;
  const std::vector<std::string> actions = {"Rock", "Paper", "Scissors"};
  return Game({"row", "column"}, {actions, actions}, {row, -row});
}

Game RockPaperScissorsDuplicateRock() {
  return CloneAction(RockPaperScissors(), 0, 0);
}

Game Chicken() {
  VectorXd row(4), column(4);
  row << 0, -1,
         1, -12;
  column << 0, 1,
            -1, -12;
  const std::vector<std::string> actions = {"Swerve", "Straight"};
  return Game({"player1", "player2"}, {actions, actions}, {row, column});
}

Game ChickenDuplicateStraight() {
  return CloneAction(CloneAction(Chicken(), 0, 1), 1, 1);
}

Game CloneAction(const Game& game, int player, int action, std::string label) {
  if (player < 0 || player >= game.num_players()) {
    throw DimensionError("player index out of range");
  }
  if (action < 0 || action >= game.num_actions(player)) {
    throw DimensionError("action index out of range");
  }
  std::vector<std::vector<std::string>> labels;
  for (int i = 0; i < game.num_players(); ++i) {
    labels.push_back(game.action_labels(i));
  }
  std::vector<std::string>& own = labels[player];
  if (label.empty()) {
    for (int n = 1;; ++n) {
      label = own[action] + "~" + std::to_string(n);
      if (std::find(own.begin(), own.end(), label) == own.end()) break;
    }
  }
  own.push_back(label);

  const TensorShape& shape = game.shape();
  std::vector<int> dims = shape.dims();
  ++dims[player];
  const TensorShape grown(dims);
  std::vector<VectorXd> utilities;
  for (int i = 0; i < game.num_players(); ++i) {
    VectorXd u(grown.size());
    for (Index flat = 0; flat < grown.size(); ++flat) {
      std::vector<int> index = grown.Unravel(flat);
      if (index[player] == dims[player] - 1) index[player] = action;
      u[flat] = game.utility(i)[shape.Ravel(index)];
    }
    utilities.push_back(std::move(u));
  }
  return Game(game.player_names(), std::move(labels), std::move(utilities));
}

}  // namespace eqrate
