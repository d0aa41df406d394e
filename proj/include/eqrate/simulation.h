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

// Skill-world simulation of rating-driven model and prompt development.
//
// Prompts are distributions over S skills and models are nonnegative skill
// vectors built from Dirichlet(1) increments. The model utility on prompt p
// is p.(m_i - m_j). Each iteration optionally adds the best of P' sampled
// prompts, then grows a candidate model one increment at a time until it is
// the top-rated model.

#ifndef EQRATE_SIMULATION_H_
#define EQRATE_SIMULATION_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Dense"
#include "eqrate/game.h"
#include "eqrate/kernels.h"
#include "eqrate/solvers.h"

namespace eqrate {

enum class SimMethod { kEloSeparability, kNe, kCce };

// "ELO", "NE", "CCE".
std::string_view SimMethodTag(SimMethod method);
SimMethod ParseSimMethod(std::string_view tag);

struct SimConfig {
  int num_skills = 4;
  int initial_prompts = 10;
  int initial_models = 2;
  int candidate_prompts = 64;
  int candidate_models = 8;
  int iterations = 30;
  SimMethod method = SimMethod::kEloSeparability;
  bool additional_prompts = true;
  int trials = 32;
  std::uint64_t seed = 0;
  // Guard on the candidate-model loop of one iteration.
  int max_model_rounds = 1000;
  // ELO condition: rate models by mean utility instead of Bradley-Terry.
  bool elo_mean_utility = false;
  // Equilibrium conditions. Games are rescaled to max |u| = 1 before solving.
  QREConfig qre = FastQreConfig();
  CCEConfig cce;
  KernelConfig kernel;

  static QREConfig FastQreConfig();
  void Validate() const;
};

struct SkillWorld {
  int num_skills = 0;
  std::vector<Eigen::VectorXd> prompts;
  std::vector<Eigen::VectorXd> models;
  // increments[k] sums to models[k].
  std::vector<std::vector<Eigen::VectorXd>> increments;
};

// p.(m_i - m_j)
double SkillUtility(const Eigen::VectorXd& prompt, const Eigen::VectorXd& mi,
                    const Eigen::VectorXd& mj);

// (prompt, king, rebel) game with u_k = p.(m_i - m_j), u_p = |u_k| and
// u_r = -u_k, except -1 for the rebel when it copies the king.
Game BuildSkillGame(const std::vector<Eigen::VectorXd>& prompts,
                    const std::vector<Eigen::VectorXd>& models);
Game BuildSkillGame(const SkillWorld& world);

Eigen::VectorXd SampleDirichlet(int size, std::mt19937_64& rng);

// Natural-log Shannon entropy of the L1-normalised mean vector.
double SkillEntropy(const std::vector<Eigen::VectorXd>& vectors);

struct Snapshot {
  int iteration = 0;
  int num_prompts = 0;
  int num_models = 0;
  double prompt_entropy = 0.0;
  double model_entropy = 0.0;
  // Rounds of the candidate-model loop (0 at iteration 0).
  int model_rounds = 0;
  // Accepted model's rating minus the best rating among the older models.
  double acceptance_margin = 0.0;
};

struct Trajectory {
  SimMethod method = SimMethod::kEloSeparability;
  int trial = 0;
  std::uint64_t seed = 0;
  std::vector<Snapshot> snapshots;
  SkillWorld world;
  // Equilibrium solves that stopped at max_steps; their last iterate is used.
  int unconverged_solves = 0;
  // Max-affinity-entropy targets that stopped at max_iters; likewise.
  int unconverged_targets = 0;
  int solves = 0;
  bool aborted = false;
  std::string diagnostics;
};

// One trial seeded with config.seed + trial.
Trajectory RunTrial(const SimConfig& config, int trial);
std::vector<Trajectory> RunSimulation(const SimConfig& config);

struct EntropyRow {
  int iteration;
  int num_prompts;
  int num_models;
  double prompt_entropy;
  double model_entropy;
  std::string method;
  int trial;
  std::uint64_t seed;
};

std::vector<EntropyRow> EntropyTrace(const std::vector<Trajectory>& runs);

}  // namespace eqrate

#endif  // EQRATE_SIMULATION_H_
