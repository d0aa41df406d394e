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

#include "eqrate/simulation.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "eqrate/errors.h"
#include "eqrate/gamification.h"
#include "eqrate/ratings.h"

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

// Lowest index among the maximal entries of v.head(n).
Index ArgMaxHead(const VectorXd& v, Index n) {
  Index best = 0;
  for (Index k = 1; k < n; ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

struct WorldRatings {
  VectorXd prompts;
  VectorXd models;
};

Game Rescaled(const Game& game) {
  double scale = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    scale = std::max(scale, game.utility(i).cwiseAbs().maxCoeff());
  }
  if (scale == 0.0) return game;
  std::vector<VectorXd> utilities;
  for (int i = 0; i < game.num_players(); ++i) {
    utilities.push_back(game.utility(i) / scale);
  }
  return Game(game.player_names(),
              {game.action_labels(0), game.action_labels(1),
               game.action_labels(2)},
              std::move(utilities));
}

WorldRatings RateElo(const SimConfig& config,
                     const std::vector<VectorXd>& prompts,
                     const std::vector<VectorXd>& models) {
  const Index p = static_cast<Index>(prompts.size());
  const Index m = static_cast<Index>(models.size());
  MatrixXd pm(p, config.num_skills);
  for (Index k = 0; k < p; ++k) pm.row(k) = prompts[k].transpose();
  MatrixXd mm(m, config.num_skills);
  for (Index k = 0; k < m; ++k) mm.row(k) = models[k].transpose();
  const MatrixXd scores = pm * mm.transpose();  // p . m
  WorldRatings r;
  r.prompts.resize(p);
  for (Index k = 0; k < p; ++k) {
    double total = 0.0;
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        total += std::abs(scores(k, a) - scores(k, b));
      }
    }
    r.prompts[k] = total / static_cast<double>(m * m);
  }
  if (config.elo_mean_utility) {
    const VectorXd mean_prompt = pm.colwise().mean().transpose();
    const VectorXd mean_model = mm.colwise().mean().transpose();
    r.models = (mm * mean_prompt).array() - mean_prompt.dot(mean_model);
    return r;
  }
  MatrixXd w(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      double total = 0.0;
      for (Index k = 0; k < p; ++k) {
        total += Sigmoid(scores(k, a) - scores(k, b));
      }
      w(a, b) = total / static_cast<double>(p);
    }
  }
  r.models = EloRatings(w);
  return r;
}

WorldRatings RateEquilibrium(const SimConfig& config,
                             const std::vector<VectorXd>& prompts,
                             const std::vector<VectorXd>& models,
                             Trajectory* run) {
  const Game game = Rescaled(BuildSkillGame(prompts, models));
  // Near-duplicate candidates make the entropy ascent crawl; a target that
  // misses the gap tolerance is still close to optimal in value, so its last
  // iterate is used and counted.
  std::vector<VectorXd> targets;
  for (int i = 0; i < game.num_players(); ++i) {
    try {
      targets.push_back(
          MaxAffinityEntropy(PlayerKernel(game, i, config.kernel),
                             config.kernel.max_entropy)
              .distribution);
    } catch (const EntropyConvergenceError& e) {
      ++run->unconverged_targets;
      targets.push_back(e.last_iterate());
    }
  }
  ++run->solves;
  WorldRatings r;
  if (config.method == SimMethod::kNe) {
    QREConfig qre = config.qre;
    qre.targets = targets;
    EquilibriumResult result;
    try {
      result = SolveLle(game, qre);
    } catch (const SolverConvergenceError& e) {
      ++run->unconverged_solves;
      result = e.partial();
    }
    r.prompts = Regrets(game, result.product(), kPromptPlayer);
    r.models = Regrets(game, result.product(), kKingPlayer);
  } else {
    CCEConfig cce = config.cce;
    cce.target_log_joint = ProductTargetLogJoint(game, targets);
    EquilibriumResult result;
    try {
      result = SolveMreCce(game, cce);
    } catch (const SolverConvergenceError& e) {
      ++run->unconverged_solves;
      result = e.partial();
    }
    r.prompts = Regrets(game, result.joint(), kPromptPlayer);
    r.models = Regrets(game, result.joint(), kKingPlayer);
  }
  return r;
}

WorldRatings RateWorld(const SimConfig& config,
                       const std::vector<VectorXd>& prompts,
                       const std::vector<VectorXd>& models, Trajectory* run) {
  if (config.method == SimMethod::kEloSeparability) {
    return RateElo(config, prompts, models);
  }
  return RateEquilibrium(config, prompts, models, run);
}

Snapshot TakeSnapshot(int iteration, const SkillWorld& world) {
  Snapshot s;
  s.iteration = iteration;
  s.num_prompts = static_cast<int>(world.prompts.size());
  s.num_models = static_cast<int>(world.models.size());
  s.prompt_entropy = SkillEntropy(world.prompts);
  s.model_entropy = SkillEntropy(world.models);
  return s;
}

}  // namespace

std::string_view SimMethodTag(SimMethod method) {
  switch (method) {
    case SimMethod::kEloSeparability:
      return "ELO";
    case SimMethod::kNe:
      return "NE";
    case SimMethod::kCce:
      return "CCE";
  }
  return "?";
}

SimMethod ParseSimMethod(std::string_view tag) {
  for (SimMethod m :
       {SimMethod::kEloSeparability, SimMethod::kNe, SimMethod::kCce}) {
    if (SimMethodTag(m) == tag) return m;
  }
  throw ParameterError("unknown simulation method '" + std::string(tag) + "'");
}

QREConfig SimConfig::FastQreConfig() {
  QREConfig qre;
  qre.tau_decay = 0.8;
  qre.anneal_check_interval = 50;
  qre.anneal_gate = 1e-4;
  qre.learning_rate = 5e-2;
  qre.max_steps = 5000;
  return qre;
}

void SimConfig::Validate() const {
  if (num_skills < 1 || initial_prompts < 1 || initial_models < 1 ||
      candidate_prompts < 1 || candidate_models < 1 || iterations < 0 ||
      trials < 1 || max_model_rounds < 1) {
    throw ParameterError("simulation counts must be >= 1");
  }
}

double SkillUtility(const VectorXd& prompt, const VectorXd& mi,
                    const VectorXd& mj) {
  if (prompt.size() != mi.size() || prompt.size() != mj.size()) {
    throw DimensionError("skill vectors differ in size");
  }
  return prompt.dot(mi - mj);
}

Game BuildSkillGame(const std::vector<VectorXd>& prompts,
                    const std::vector<VectorXd>& models) {
  const Index p = static_cast<Index>(prompts.size());
  const Index m = static_cast<Index>(models.size());
  if (p < 1 || m < 2) {
    throw DimensionError("a skill game needs >= 1 prompt and >= 2 models");
  }
  std::vector<std::string> prompt_labels, model_labels;
  for (Index k = 0; k < p; ++k) prompt_labels.push_back("p" + std::to_string(k));
  for (Index k = 0; k < m; ++k) model_labels.push_back("m" + std::to_string(k));
  VectorXd up(p * m * m), uk(p * m * m), ur(p * m * m);
  for (Index q = 0; q < p; ++q) {
    for (Index a = 0; a < m; ++a) {
      const double sa = prompts[q].dot(models[a]);
      for (Index b = 0; b < m; ++b) {
        const Index flat = (q * m + a) * m + b;
        const double value = a == b ? 0.0 : sa - prompts[q].dot(models[b]);
        uk[flat] = value;
        up[flat] = std::abs(value);
        ur[flat] = a == b ? -1.0 : -value;
      }
    }
  }
  return Game({"prompt", "king", "rebel"},
              {std::move(prompt_labels), model_labels, model_labels},
              {std::move(up), std::move(uk), std::move(ur)});
}

Game BuildSkillGame(const SkillWorld& world) {
  return BuildSkillGame(world.prompts, world.models);
}

VectorXd SampleDirichlet(int size, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  VectorXd x(size);
  for (int k = 0; k < size; ++k) x[k] = gamma(rng);
  return x / x.sum();
}

double SkillEntropy(const std::vector<VectorXd>& vectors) {
  if (vectors.empty()) throw ParameterError("no vectors");
  VectorXd mean = VectorXd::Zero(vectors.front().size());
  for (const VectorXd& v : vectors) mean += v;
  const double total = mean.sum();
  if (!(total > 0.0)) throw ParameterError("mean vector must have positive mass");
  return ShannonEntropy(mean / total);
}

Trajectory RunTrial(const SimConfig& config, int trial) {
  config.Validate();
  Trajectory run;
  run.method = config.method;
  run.trial = trial;
  run.seed = config.seed + static_cast<std::uint64_t>(trial);
  std::mt19937_64 rng(run.seed);
  const int s = config.num_skills;
  SkillWorld& world = run.world;
  world.num_skills = s;
  for (int k = 0; k < config.initial_prompts; ++k) {
    world.prompts.push_back(SampleDirichlet(s, rng));
  }
  for (int k = 0; k < config.initial_models; ++k) {
    world.models.push_back(SampleDirichlet(s, rng));
    world.increments.push_back({world.models.back()});
  }
  run.snapshots.push_back(TakeSnapshot(0, world));

  for (int t = 1; t <= config.iterations; ++t) {
    if (config.additional_prompts) {
      std::vector<VectorXd> pool;
      for (int k = 0; k < config.candidate_prompts; ++k) {
        pool.push_back(SampleDirichlet(s, rng));
      }
      const std::vector<VectorXd> candidates = pool;
      pool.insert(pool.end(), world.prompts.begin(), world.prompts.end());
      const VectorXd r = RateWorld(config, pool, world.models, &run).prompts;
      world.prompts.push_back(
          candidates[ArgMaxHead(r, config.candidate_prompts)]);
    }

    VectorXd candidate = VectorXd::Zero(s);
    std::vector<VectorXd> increments;
    bool accepted = false;
    int round = 0;
    double margin = 0.0;
    while (!accepted) {
      if (round >= config.max_model_rounds) {
        run.aborted = true;
        run.diagnostics = "iteration " + std::to_string(t) +
                          ": no top-ranked candidate after " +
                          std::to_string(round) + " rounds";
        return run;
      }
      ++round;
      std::vector<VectorXd> deltas, pool;
      for (int k = 0; k < config.candidate_models; ++k) {
        deltas.push_back(SampleDirichlet(s, rng));
        pool.push_back(candidate + deltas.back());
      }
      pool.insert(pool.end(), world.models.begin(), world.models.end());
      const VectorXd r = RateWorld(config, world.prompts, pool, &run).models;
      const Index best = ArgMaxHead(r, config.candidate_models);
      const double incumbent =
          r.tail(r.size() - config.candidate_models).maxCoeff();
      candidate += deltas[best];
      increments.push_back(deltas[best]);
      if (r[best] > incumbent) {
        accepted = true;
        margin = r[best] - incumbent;
      }
    }
    world.models.push_back(candidate);
    world.increments.push_back(std::move(increments));
    Snapshot snap = TakeSnapshot(t, world);
    snap.model_rounds = round;
    snap.acceptance_margin = margin;
    run.snapshots.push_back(snap);
  }
  return run;
}

std::vector<Trajectory> RunSimulation(const SimConfig& config) {
  config.Validate();
  std::vector<Trajectory> runs;
  for (int trial = 0; trial < config.trials; ++trial) {
    runs.push_back(RunTrial(config, trial));
  }
  return runs;
}

std::vector<EntropyRow> EntropyTrace(const std::vector<Trajectory>& runs) {
  if (runs.empty()) throw ParameterError("no trajectories");
  std::vector<EntropyRow> rows;
  for (const Trajectory& run : runs) {
    for (const Snapshot& s : run.snapshots) {
      rows.push_back({s.iteration, s.num_prompts, s.num_models,
                      s.prompt_entropy, s.model_entropy,
                      std::string(SimMethodTag(run.method)), run.trial,
                      run.seed});
    }
  }
  return rows;
}

}  // namespace eqrate
