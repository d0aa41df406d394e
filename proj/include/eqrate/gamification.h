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

// King-of-the-hill games built from pairwise preference data.
//
// Players are (prompt, king, rebel). The king's payoff u_k(p, a, b) is the
// preference for model a over model b on prompt p; the prompt player earns
// |u_k| and the rebel earns -u_k, except that a rebel copying the king gets
// -1.

#ifndef EQRATE_GAMIFICATION_H_
#define EQRATE_GAMIFICATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "eqrate/game.h"

namespace eqrate {

struct PreferenceRecord {
  std::string prompt_id;
  std::string model_a;
  std::string model_b;
  double score = 0.0;  // in {-1, -0.5, 0, 0.5, 1}, a over b
};

// Throws ParameterError unless `score` is exactly one of the five values.
void CheckPreferenceScore(double score);

inline constexpr int kPromptPlayer = 0;
inline constexpr int kKingPlayer = 1;
inline constexpr int kRebelPlayer = 2;

struct KothGame {
  Game game;
  // Per prompt: -1 for an original prompt, otherwise the original it copies.
  std::vector<int> clone_source;

  int num_prompts() const { return game.num_actions(kPromptPlayer); }
  int num_models() const { return game.num_actions(kKingPlayer); }
  const std::vector<std::string>& prompts() const {
    return game.action_labels(kPromptPlayer);
  }
  const std::vector<std::string>& models() const {
    return game.action_labels(kKingPlayer);
  }
  // u_k as a P x M x M row-major tensor.
  const Eigen::VectorXd& king_utility() const {
    return game.utility(kKingPlayer);
  }
};

// Derives u_p and u_r from u_k. The king=rebel diagonal of u_k is set to 0.
KothGame KothFromKingUtility(std::vector<std::string> prompts,
                             std::vector<std::string> models,
                             Eigen::VectorXd king_utility,
                             std::vector<int> clone_source = {});

// Averages the samples of every (prompt, a, b) cell. When both orders of a
// pair were recorded the cell is the mean of mean score(a, b) and
// mean -score(b, a), so u_k is antisymmetric. Prompts and models keep their
// order of first appearance. Throws IncompleteDataError naming every
// (prompt, pair) without data.
KothGame BuildKoth(const std::vector<PreferenceRecord>& records);

// Draws `count` prompt indices i.i.d. from softmax(-lambda * ubar) with
// ubar(p) = (1/M) sum_b u_k(p, target, b).
std::vector<int> AdversarialPromptSampler(const KothGame& koth,
                                          const std::string& target_model,
                                          double lambda, int count,
                                          std::uint64_t seed);

// Appends copies of the given prompts. With noise_halfwidth > 0 each model
// pair a < b of a copy draws e ~ Uniform(-h, h), adds it to u_k(p, a, b) and
// subtracts it from u_k(p, b, a); u_p and u_r are rederived.
KothGame InjectClones(const KothGame& koth, const std::vector<int>& prompts,
                      double noise_halfwidth, std::uint64_t seed);

// W(a, b) = mean over prompts of (u_k(p, a, b) + 1) / 2.
Eigen::MatrixXd KothWinMatrix(const KothGame& koth);

// Bradley-Terry Elo of the models on KothWinMatrix.
Eigen::VectorXd KothElo(const KothGame& koth, double reg = 1e-6);

struct SyntheticKothConfig {
  int models = 12;
  int prompts = 200;
  // Prompts on which the first model loses to every other model.
  int adversarial_prompts = 10;
  // Model k has strength spread * (1 - k / (M - 1)); the first is strongest.
  double spread = 1.0;
  double noise = 0.5;
  std::uint64_t seed = 0;
};

// A random king-of-the-hill game with 5-point payoffs. The first model wins
// on most prompts; the adversarial prompts come first in the prompt order.
KothGame SyntheticKoth(const SyntheticKothConfig& config);

}  // namespace eqrate

#endif  // EQRATE_GAMIFICATION_H_
