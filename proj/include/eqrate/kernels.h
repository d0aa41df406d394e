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

// Strategic similarity between a player's actions and the affinity entropy
// built on top of it.
//
// Affinity entropy is a Tsallis-style entropy evaluated through a
// column-normalised similarity kernel U = K diag(1 / ||K_col||_{p+1}):
//
//   H(x) = (1/p) [1 - sum_i (U x)_i^{p+1}],   p in (0, 1].
//
// With an identity kernel this is plain Tsallis entropy. When K is a block of
// ones over a group of exact clones, the group behaves as a single action:
// maximisers spread mass 1/C over the C groups and the maximum equals the
// Tsallis entropy of C distinct actions.

#ifndef EQRATE_KERNELS_H_
#define EQRATE_KERNELS_H_

#include <cmath>
#include <vector>

#include "Eigen/Dense"
#include "eqrate/errors.h"
#include "eqrate/game.h"

namespace eqrate {

// Default (2 sigma)^2 in the RBF kernel exp(-D / (2 sigma)^2).
inline constexpr double kDefaultKernelVariance = 1e-6;

struct AffinityKernel {
  Eigen::MatrixXd similarity;  // K: symmetric, unit diagonal, entries in [0,1]
  Eigen::MatrixXd normalized;  // U^(p): columns of unit (p+1)-norm
  double entropic_index = 1.0;  // p
  double variance = kDefaultKernelVariance;  // (2 sigma)^2

  double sigma() const { return std::sqrt(variance) / 2.0; }
  Eigen::Index size() const { return similarity.rows(); }

  // Validates K and computes U^(p). `variance` is recorded for provenance.
  static AffinityKernel FromSimilarity(Eigen::MatrixXd similarity,
                                       double entropic_index = 1.0,
                                       double variance = kDefaultKernelVariance);
};

// U^(p) = K diag(1 / ||K_{:,j}||_{p+1}).
Eigen::MatrixXd NormalizeKernelColumns(const Eigen::MatrixXd& similarity,
                                       double entropic_index);

// Expected squared payoff difference between two actions of `player` when the
// co-players' joint profile is drawn uniformly from the simplex over A_{-i}.
Eigen::MatrixXd DissimilarityJoint(const Game& game, int player);

// Same expectation when each co-player's strategy is drawn independently and
// uniformly from its own simplex.
Eigen::MatrixXd DissimilarityFactorized(const Game& game, int player);

// K = exp(-D / (2 sigma)^2).
Eigen::MatrixXd SimilarityKernel(const Eigen::MatrixXd& dissimilarity,
                                 double sigma);
// K = exp(-D / variance), variance = (2 sigma)^2.
Eigen::MatrixXd SimilarityKernelFromVariance(
    const Eigen::MatrixXd& dissimilarity, double variance);

template <typename Derived>
double AffinityEntropy(const AffinityKernel& kernel,
                       const Eigen::MatrixBase<Derived>& x) {
  const double p = kernel.entropic_index;
  const Eigen::VectorXd y = kernel.normalized * x;
  return (1.0 - y.array().pow(p + 1.0).sum()) / p;
}

// -((p+1)/p) U^T (U x)^p
template <typename Derived>
Eigen::VectorXd AffinityEntropyGradient(const AffinityKernel& kernel,
                                        const Eigen::MatrixBase<Derived>& x) {
  const double p = kernel.entropic_index;
  const Eigen::VectorXd y = kernel.normalized * x;
  return -((p + 1.0) / p) *
         (kernel.normalized.transpose() * y.array().pow(p).matrix());
}

// The p -> 0 limit of affinity entropy, in closed form:
//   S(U0 x) - sum_j [log sum_i K_ij - sum_i U0_ij log K_ij] x_j
// with U0 the column-sum normalised K and K log K = 0 at K = 0.
double ShannonAffinityEntropy(const Eigen::MatrixXd& similarity,
                              const Eigen::VectorXd& x);

// Natural-log Shannon entropy with 0 log 0 = 0.
double ShannonEntropy(const Eigen::VectorXd& x);

struct MaxEntropyOptions {
  // Bound on the Frank-Wolfe gap max_j g_j - x.g, which upper-bounds the
  // distance to the optimal entropy value.
  double tolerance = 1e-8;
  int max_iters = 100000;
  double initial_step = 1e-2;
};

struct MaxEntropyResult {
  Eigen::VectorXd distribution;
  double entropy = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

class EntropyConvergenceError : public ConvergenceError {
 public:
  EntropyConvergenceError(const std::string& what, Eigen::VectorXd last,
                          double gap)
      : ConvergenceError(what), last_(std::move(last)), gap_(gap) {}
  const Eigen::VectorXd& last_iterate() const { return last_; }
  double gap() const { return gap_; }

 private:
  Eigen::VectorXd last_;
  double gap_;
};

// argmax_x H(x) over the simplex by mirror ascent (exponentiated gradient)
// from the uniform distribution. Iterates stay in the interior.
MaxEntropyResult MaxAffinityEntropy(const AffinityKernel& kernel,
                                    const MaxEntropyOptions& options = {});

enum class DissimilarityKind { kJoint, kFactorized };

struct KernelConfig {
  double entropic_index = 1.0;
  double variance = kDefaultKernelVariance;
  DissimilarityKind dissimilarity = DissimilarityKind::kJoint;
  MaxEntropyOptions max_entropy;
};

AffinityKernel PlayerKernel(const Game& game, int player,
                            const KernelConfig& config = {});

// Max-affinity-entropy distribution of every player; the default selection
// target for the equilibrium solvers.
std::vector<Eigen::VectorXd> AffinityTargets(const Game& game,
                                             const KernelConfig& config = {});

// Uniform (max Shannon entropy) targets.
std::vector<Eigen::VectorXd> UniformTargets(const Game& game);

}  // namespace eqrate

#endif  // EQRATE_KERNELS_H_
