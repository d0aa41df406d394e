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

#include "eqrate/gamification.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "eqrate/errors.h"
#include "eqrate/ratings.h"

namespace eqrate {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

int IndexOf(std::vector<std::string>& order,
            std::unordered_map<std::string, int>& index,
            const std::string& key) {
  const auto [it, inserted] =
      index.emplace(key, static_cast<int>(order.size()));
  if (inserted) order.push_back(key);
  return it->second;
}

struct CellSums {
  double sum = 0.0;
  int count = 0;
};

}  // namespace

void CheckPreferenceScore(double score) {
  if (score != -1.0 && score != -0.5 && score != 0.0 && score != 0.5 &&
      score != 1.0) {
    throw ParameterError("preference score must be one of -1, -0.5, 0, 0.5, 1");
  }
}

KothGame KothFromKingUtility(std::vector<std::string> prompts,
                             std::vector<std::string> models,
                             VectorXd king_utility,
                             std::vector<int> clone_source) {
  const Index p = static_cast<Index>(prompts.size());
  const Index m = static_cast<Index>(models.size());
  if (p < 1 || m < 1) throw DimensionError("need at least one prompt and model");
  if (king_utility.size() != p * m * m) {
    throw DimensionError("king utility must have P * M * M entries");
  }
  if (clone_source.empty()) clone_source.assign(p, -1);
  if (static_cast<Index>(clone_source.size()) != p) {
    throw DimensionError("one clone source per prompt required");
  }
  VectorXd prompt_utility(p * m * m), rebel_utility(p * m * m);
  for (Index q = 0; q < p; ++q) {
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        const Index flat = (q * m + a) * m + b;
        if (a == b) {
          king_utility[flat] = 0.0;
          prompt_utility[flat] = 0.0;
          rebel_utility[flat] = -1.0;
        } else {
          prompt_utility[flat] = std::abs(king_utility[flat]);
          rebel_utility[flat] = -king_utility[flat];
        }
      }
    }
  }
  Game game({"prompt", "king", "rebel"},
            {std::move(prompts), models, models},
            {std::move(prompt_utility), std::move(king_utility),
             std::move(rebel_utility)});
  return {std::move(game), std::move(clone_source)};
}

KothGame BuildKoth(const std::vector<PreferenceRecord>& records) {
  if (records.empty()) throw IncompleteDataError("no preference records");
  std::vector<std::string> prompts, models;
  std::unordered_map<std::string, int> prompt_index, model_index;
  // (prompt, a, b) -> sum and count of score(a over b).
  std::map<std::tuple<int, int, int>, CellSums> cells;
  for (const PreferenceRecord& r : records) {
    CheckPreferenceScore(r.score);
    if (r.model_a == r.model_b) {
      throw ParameterError("record compares " + r.model_a + " with itself");
    }
    const int q = IndexOf(prompts, prompt_index, r.prompt_id);
    const int a = IndexOf(models, model_index, r.model_a);
    const int b = IndexOf(models, model_index, r.model_b);
    CellSums& cell = cells[{q, a, b}];
    cell.sum += r.score;
    ++cell.count;
  }
  const int p = static_cast<int>(prompts.size());
  const int m = static_cast<int>(models.size());
  VectorXd king = VectorXd::Zero(static_cast<Index>(p) * m * m);
  std::vector<std::string> missing;
  for (int q = 0; q < p; ++q) {
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        const auto ab = cells.find({q, a, b});
        const auto ba = cells.find({q, b, a});
        const bool has_ab = ab != cells.end();
        const bool has_ba = ba != cells.end();
        if (!has_ab && !has_ba) {
          missing.push_back(prompts[q] + ":" + models[a] + "|" + models[b]);
          continue;
        }
        double value;
        if (has_ab && has_ba) {
          value = 0.5 * (ab->second.sum / ab->second.count -
                         ba->second.sum / ba->second.count);
        } else if (has_ab) {
          value = ab->second.sum / ab->second.count;
        } else {
          value = -ba->second.sum / ba->second.count;
        }
        king[(static_cast<Index>(q) * m + a) * m + b] = value;
        king[(static_cast<Index>(q) * m + b) * m + a] = -value;
      }
    }
  }
  if (!missing.empty()) {
    std::string what = "missing preference cells:";
    for (const std::string& key : missing) what += " " + key;
    throw IncompleteDataError(what);
  }
  return KothFromKingUtility(std::move(prompts), std::move(models),
                             std::move(king));
}

std::vector<int> AdversarialPromptSampler(const KothGame& koth,
                                          const std::string& target_model,
                                          double lambda, int count,
                                          std::uint64_t seed) {
  if (koth.num_prompts() == 0) throw ParameterError("no prompts to sample");
  if (count < 0) throw ParameterError("count must be >= 0");
  if (!std::isfinite(lambda)) throw ParameterError("lambda must be finite");
  const int target = koth.game.ActionIndex(kKingPlayer, target_model);
  const Index m = koth.num_models();
  VectorXd logits(koth.num_prompts());
  for (Index q = 0; q < logits.size(); ++q) {
    const double mean =
        koth.king_utility().segment((q * m + target) * m, m).mean();
    logits[q] = -lambda * mean;
  }
  const VectorXd weights = (logits.array() - logits.maxCoeff()).exp();
  std::discrete_distribution<int> pick(weights.data(),
                                       weights.data() + weights.size());
  std::mt19937_64 rng(seed);
  std::vector<int> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(pick(rng));
  return out;
}

KothGame InjectClones(const KothGame& koth, const std::vector<int>& indices,
                      double noise_halfwidth, std::uint64_t seed) {
  if (!(noise_halfwidth >= 0.0)) {
    throw ParameterError("noise half-width must be >= 0");
  }
  const Index p = koth.num_prompts();
  const Index m = koth.num_models();
  const Index block = m * m;
  std::vector<std::string> prompts = koth.prompts();
  std::vector<int> clone_source = koth.clone_source;
  std::unordered_map<std::string, int> copies;
  VectorXd king(koth.king_utility().size() + block * indices.size());
  king.head(koth.king_utility().size()) = koth.king_utility();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-noise_halfwidth,
                                               noise_halfwidth);
  Index row = p;
  for (int source : indices) {
    if (source < 0 || source >= p) {
      throw DimensionError("clone source index out of range");
    }
    const int root = clone_source[source] >= 0 ? clone_source[source] : source;
    king.segment(row * block, block) =
        koth.king_utility().segment(source * block, block);
    if (noise_halfwidth > 0.0) {
      for (Index a = 0; a < m; ++a) {
        for (Index b = a + 1; b < m; ++b) {
          const double e = noise(rng);
          king[row * block + a * m + b] += e;
          king[row * block + b * m + a] -= e;
        }
      }
    }
    std::string label;
    do {
      label = koth.prompts()[root] + "~" + std::to_string(++copies[koth.prompts()[root]]);
    } while (std::find(prompts.begin(), prompts.end(), label) != prompts.end());
    prompts.push_back(std::move(label));
    clone_source.push_back(root);
    ++row;
  }
  return KothFromKingUtility(std::move(prompts), koth.models(),
                             std::move(king), std::move(clone_source));
}

MatrixXd KothWinMatrix(const KothGame& koth) {
  const Index p = koth.num_prompts();
  const Index m = koth.num_models();
  MatrixXd w = MatrixXd::Zero(m, m);
  for (Index q = 0; q < p; ++q) {
    w += Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
        koth.king_utility().data() + q * m * m, m, m);
  }
  w = ((w / static_cast<double>(p)).array() + 1.0) / 2.0;
  w = w.cwiseMax(0.0).cwiseMin(1.0);
  w.diagonal().setConstant(0.5);
  return w;
}

VectorXd KothElo(const KothGame& koth, double reg) {
  return EloRatings(KothWinMatrix(koth), reg);
}

KothGame SyntheticKoth(const SyntheticKothConfig& config) {
  if (config.models < 2 || config.prompts < 1 ||
      config.adversarial_prompts < 0 ||
      config.adversarial_prompts > config.prompts || !(config.noise >= 0.0)) {
    throw ParameterError("invalid synthetic game configuration");
  }
  const int m = config.models;
  const int p = config.prompts;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto quantize = [](double v) {
    return std::round(std::clamp(v, -1.0, 1.0) * 2.0) / 2.0;
  };
  VectorXd strength(m);
  for (int k = 0; k < m; ++k) {
    strength[k] = config.spread * (1.0 - static_cast<double>(k) / (m - 1));
  }
  VectorXd king = VectorXd::Zero(static_cast<Index>(p) * m * m);
  std::vector<std::string> prompts, models;
  for (int k = 0; k < m; ++k) models.push_back("model" + std::to_string(k));
  for (int q = 0; q < p; ++q) {
    const bool adversarial = q < config.adversarial_prompts;
    prompts.push_back((adversarial ? "adv" : "prompt") + std::to_string(q));
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        double value = quantize(strength[a] - strength[b] +
                                config.noise * gauss(rng));
        if (adversarial && a == 0) value = -1.0;
        king[(static_cast<Index>(q) * m + a) * m + b] = value;
        king[(static_cast<Index>(q) * m + b) * m + a] = -value;
      }
    }
  }
  return KothFromKingUtility(std::move(prompts), std::move(models),
                             std::move(king));
}

}  // namespace eqrate
