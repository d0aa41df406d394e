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

// Small reference games with known equilibria.

#ifndef EQRATE_TOY_GAMES_H_
#define EQRATE_TOY_GAMES_H_

#include <string>

#include "eqrate/game.h"

namespace eqrate {

// Zero-sum Rock-Paper-Scissors, payoffs in {-1, 0, 1}.
Game RockPaperScissors();

// RPS where the row player has a second, identical Rock.
Game RockPaperScissorsDuplicateRock();

// Symmetric Chicken: both swerve 0, swerve vs straight -1 / +1, both
// straight -12. The mixed NE swerves with probability 11/12.
Game Chicken();

// Chicken where both players get an exact copy of Straight.
Game ChickenDuplicateStraight();

// Appends an exact copy of `action` to `player`'s action set. The copy is
// labelled `label`, or "<original>~1" (~2, ... if taken) when empty.
Game CloneAction(const Game& game, int player, int action,
                 std::string label = "");

}  // namespace eqrate

#endif  // EQRATE_TOY_GAMES_H_
