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

#include <cmath>
#include <random>

#include "doctest.h"
#include "eqrate/errors.h"
#include "eqrate/kernels.h"
#include "eqrate/toy_games.h"
#include "test_support.h"

namespace eqrate {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using testing::RandomGame;
using testing::RandomInterior;
using testing::RandomSimplex;

// RBF kernel over random points, so every entry lies in (0, 1].
MatrixXd RandomSimilarity(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd points(n, 2);
  for (Index k = 0; k < points.size(); ++k) points.data()[k] = normal(rng);
  MatrixXd k(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      k(a, b) = std::exp(-(points.row(a) - points.row(b)).squaredNorm());
    }
  }
  return k;
}

// Block of ones over each group of clones.
MatrixXd BlockOnes(const std::vector<int>& group_of) {
  const int n = static_cast<int>(group_of.size());
  MatrixXd k = MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) k(a, b) = group_of[a] == group_of[b];
  }
  return k;
}

VectorXd GroupMasses(const VectorXd& x, const std::vector<int>& group_of,
                     int groups) {
  VectorXd m = VectorXd::Zero(groups);
  for (Index a = 0; a < x.size(); ++a) m[group_of[a]] += x[a];
  return m;
}

// Uniform point of the solid simplex {y >= 0, sum y <= 1} in R^d.
VectorXd SolidSimplexPoint(int d, std::mt19937_64& rng) {
  return RandomSimplex(d + 1, rng).head(d);
}

TEST_CASE("joint dissimilarity examples") {
  const Game dup = RockPaperScissorsDuplicateRock();
  const MatrixXd d_dup = DissimilarityJoint(dup, 0);
  CHECK(d_dup(0, 3) == 0.0);
  CHECK(d_dup.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((d_dup - d_dup.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const MatrixXd d = DissimilarityJoint(RockPaperScissors(), 0);
  CHECK(d(0, 1) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("joint dissimilarity matches a Monte Carlo oracle") {
  // E[((u_a - u_b) . y)^2] with y uniform on the solid simplex over A_{-i}.
  std::mt19937_64 rng(21);
  const Game rps = RockPaperScissors();
  const MatrixXd closed = DissimilarityJoint(rps, 0);
  VectorXd diff(3);
  diff << -1, -1, 2;  // Rock row minus Paper row
  const int samples = 10000000;
  double mean = 0.0;
  double second = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double v = std::pow(diff.dot(SolidSimplexPoint(3, rng)), 2);
    mean += v;
    second += v * v;
  }
  mean /= samples;
  const double stderr_ = std::sqrt((second / samples - mean * mean) / samples);
  MESSAGE("Monte Carlo " << mean << " +- " << stderr_ << ", closed form "
                         << closed(0, 1));
  CHECK(std::abs(mean - closed(0, 1)) < 5e-4 * closed(0, 1));
}

TEST_CASE("factorised dissimilarity examples") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Game two = RandomGame({4, 3}, rng);
    CHECK((DissimilarityFactorized(two, 0) - DissimilarityJoint(two, 0))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((DissimilarityFactorized(two, 1) - DissimilarityJoint(two, 1))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  const Game dup = CloneAction(RandomGame({2, 2, 2}, rng), 1, 0);
  CHECK(DissimilarityFactorized(dup, 1)(0, 2) == 0.0);
}

TEST_CASE("factorised dissimilarity matches a Monte Carlo oracle") {
  // Each co-player draws its own point of the solid simplex.
  std::mt19937_64 rng(23);
  const Game game = RandomGame({2, 2, 2}, rng);
  for (int player = 0; player < 3; ++player) {
    const MatrixXd closed = DissimilarityFactorized(game, player);
    const int j = player == 0 ? 1 : 0;
    const int k = player == 2 ? 1 : 2;
    const int samples = 2000000;
    double mean = 0.0;
    for (int s = 0; s < samples; ++s) {
      const VectorXd yj = SolidSimplexPoint(2, rng);
      const VectorXd yk = SolidSimplexPoint(2, rng);
      double v = 0.0;
      for (int aj = 0; aj < 2; ++aj) {
        for (int ak = 0; ak < 2; ++ak) {
          std::vector<int> p(3), q(3);
          p[player] = 0;
          q[player] = 1;
          p[j] = q[j] = aj;
          p[k] = q[k] = ak;
          v += yj[aj] * yk[ak] * (game.Payoff(player, p) - game.Payoff(player, q));
        }
      }
      mean += v * v;
    }
    mean /= samples;
    MESSAGE("player " << player << ": Monte Carlo " << mean
                      << ", closed form " << closed(0, 1));
    CHECK(std::abs(mean - closed(0, 1)) < 5e-3 * closed(0, 1));
  }
}

TEST_CASE("similarity kernel examples") {
  const double sigma = 0.3;
  const double v = 4.0 * sigma * sigma;
  CHECK(SimilarityKernel(MatrixXd::Zero(3, 3), sigma) == MatrixXd::Ones(3, 3));
  MatrixXd d = MatrixXd::Constant(2, 2, v);
  d.diagonal().setZero();
  const MatrixXd k = SimilarityKernel(d, sigma);
  CHECK(k(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(k(0, 0) == 1.0);
  const Game dup = RockPaperScissorsDuplicateRock();
  CHECK(SimilarityKernel(DissimilarityJoint(dup, 0), 1e-3)(0, 3) == 1.0);
  CHECK_THROWS_AS(SimilarityKernel(d, 0.0), ParameterError);
  CHECK_THROWS_AS(SimilarityKernel(d, -1.0), ParameterError);
}

TEST_CASE("similarity kernel is monotone in dissimilarity") {
  std::mt19937_64 rng(24);
  const MatrixXd d = DissimilarityJoint(RandomGame({6, 5}, rng), 0);
  const MatrixXd k = SimilarityKernelFromVariance(d, 0.5);
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      for (int c = 0; c < 6; ++c) {
        if (d(a, b) <= d(a, c)) CHECK(k(a, b) >= k(a, c));
      }
    }
  }
}

TEST_CASE("affinity kernel invariants") {
  std::mt19937_64 rng(25);
  for (double p : {0.25, 0.5, 1.0}) {
    const AffinityKernel kernel =
        AffinityKernel::FromSimilarity(RandomSimilarity(5, rng), p);
    const VectorXd norms = kernel.normalized.array()
                               .pow(p + 1.0)
                               .colwise()
                               .sum()
                               .pow(1.0 / (p + 1.0))
                               .transpose();
    CHECK((norms.array() - 1.0).abs().maxCoeff() < 1e-9);
    CHECK(kernel.normalized.minCoeff() >= 0.0);
  }
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(AffinityKernel::FromSimilarity(bad), ParameterError);
  CHECK_THROWS_AS(AffinityKernel::FromSimilarity(MatrixXd::Identity(2, 2), 0.0),
                  ParameterError);
  CHECK_THROWS_AS(AffinityKernel::FromSimilarity(MatrixXd::Identity(2, 2), 1.5),
                  ParameterError);
  MatrixXd off_diagonal = MatrixXd::Identity(2, 2);
  off_diagonal(1, 1) = 0.9;
  CHECK_THROWS_AS(AffinityKernel::FromSimilarity(off_diagonal), ParameterError);
}

TEST_CASE("affinity entropy examples") {
  const AffinityKernel identity =
      AffinityKernel::FromSimilarity(MatrixXd::Identity(3, 3));
  CHECK(AffinityEntropy(identity, VectorXd::Constant(3, 1.0 / 3)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(AffinityEntropy(identity, VectorXd::Unit(3, 1)) == 0.0);
  const std::vector<int> groups{0, 0, 1, 1, 1};
  const AffinityKernel blocks = AffinityKernel::FromSimilarity(BlockOnes(groups));
  VectorXd x(5);
  x << 0.1, 0.4, 0.2, 0.2, 0.1;
  CHECK(AffinityEntropy(blocks, x) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("affinity entropy gradient examples") {
  const AffinityKernel identity =
      AffinityKernel::FromSimilarity(MatrixXd::Identity(3, 3));
  const VectorXd g = AffinityEntropyGradient(identity, VectorXd::Constant(3, 1.0 / 3));
  CHECK((g.array() + 2.0 / 3.0).abs().maxCoeff() < 1e-12);
  const AffinityKernel ones = AffinityKernel::FromSimilarity(MatrixXd::Ones(4, 4));
  std::mt19937_64 rng(26);
  const VectorXd flat = AffinityEntropyGradient(ones, RandomInterior(4, rng));
  CHECK(flat.maxCoeff() - flat.minCoeff() < 1e-12);
}

TEST_CASE("affinity entropy gradient matches finite differences") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const double p = trial % 2 == 0 ? 1.0 : 0.5;
    const AffinityKernel kernel =
        AffinityKernel::FromSimilarity(RandomSimilarity(5, rng), p);
    const VectorXd x = RandomInterior(5, rng, 0.05);
    const VectorXd numeric = testing::NumericGradient(
        [&](const VectorXd& y) { return AffinityEntropy(kernel, y); }, x, 1e-6);
    CHECK(testing::RelativeError(AffinityEntropyGradient(kernel, x), numeric) <=
          1e-5);
  }
}

TEST_CASE("shannon affinity entropy examples") {
  std::mt19937_64 rng(28);
  const VectorXd x = RandomInterior(4, rng);
  CHECK(ShannonAffinityEntropy(MatrixXd::Identity(4, 4), x) ==
        doctest::Approx(ShannonEntropy(x)).epsilon(1e-12));
  for (int c : {2, 3, 4}) {
    std::vector<int> groups;
    for (int g = 0; g < c; ++g) {
      for (int copies = 0; copies <= g; ++copies) groups.push_back(g);
    }
    VectorXd y(groups.size());
    for (std::size_t a = 0; a < groups.size(); ++a) {
      y[a] = 1.0 / (c * (groups[a] + 1.0));
    }
    CHECK(ShannonAffinityEntropy(BlockOnes(groups), y) ==
          doctest::Approx(std::log(c)).epsilon(1e-12));
  }
}

TEST_CASE("shannon affinity entropy is the small-p limit") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixXd k = RandomSimilarity(5, rng);
    const VectorXd x = RandomSimplex(5, rng);
    const AffinityKernel kernel = AffinityKernel::FromSimilarity(k, 1e-4);
    CHECK(std::abs(AffinityEntropy(kernel, x) - ShannonAffinityEntropy(k, x)) <
          1e-3);
  }
}

TEST_CASE("max affinity entropy examples") {
  const MaxEntropyResult uniform = MaxAffinityEntropy(
      AffinityKernel::FromSimilarity(MatrixXd::Identity(3, 3)));
  CHECK((uniform.distribution.array() - 1.0 / 3).abs().maxCoeff() < 1e-8);

  const Game dup = RockPaperScissorsDuplicateRock();
  const MaxEntropyResult rps = MaxAffinityEntropy(PlayerKernel(dup, 0));
  const VectorXd masses = GroupMasses(rps.distribution, {0, 1, 2, 0}, 3);
  CHECK((masses.array() - 1.0 / 3).abs().maxCoeff() < 1e-4);
  CHECK(rps.gap <= 1e-8);

  const std::vector<int> groups{0, 0, 0, 1};
  const MaxEntropyResult split =
      MaxAffinityEntropy(AffinityKernel::FromSimilarity(BlockOnes(groups)));
  const VectorXd halves = GroupMasses(split.distribution, groups, 2);
  CHECK((halves.array() - 0.5).abs().maxCoeff() < 1e-4);
  CHECK(std::abs(split.entropy - 0.5) < 1e-4);
}

TEST_CASE("max affinity entropy reports non-convergence") {
  const std::vector<int> groups{0, 0, 0, 1};
  MaxEntropyOptions options;
  options.max_iters = 2;
  try {
    MaxAffinityEntropy(AffinityKernel::FromSimilarity(BlockOnes(groups)),
                       options);
    FAIL("expected a convergence error");
  } catch (const EntropyConvergenceError& e) {
    CHECK(e.last_iterate().size() == 4);
    CHECK(e.gap() > options.tolerance);
  }
}

TEST_CASE("affinity entropy is nonnegative") {
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> index(0.05, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 6;
    const AffinityKernel kernel =
        AffinityKernel::FromSimilarity(RandomSimilarity(n, rng), index(rng));
    CHECK(AffinityEntropy(kernel, RandomSimplex(n, rng)) >= -1e-12);
  }
}

TEST_CASE("affinity entropy is concave") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const AffinityKernel kernel =
        AffinityKernel::FromSimilarity(RandomSimilarity(4, rng), 0.05 + unit(rng) * 0.95);
    const VectorXd x = RandomSimplex(4, rng);
    const VectorXd y = RandomSimplex(4, rng);
    const double l = unit(rng);
    CHECK(AffinityEntropy(kernel, l * x + (1 - l) * y) >=
          l * AffinityEntropy(kernel, x) + (1 - l) * AffinityEntropy(kernel, y) -
              1e-10);
  }
}

TEST_CASE("clone value theorem") {
  for (double p : {0.5, 1.0}) {
    for (int c : {2, 3, 4}) {
      std::vector<int> groups;
      for (int g = 0; g < c; ++g) {
        for (int copies = 0; copies < 1 + (g * 2) % 3; ++copies) {
          groups.push_back(g);
        }
      }
      const MaxEntropyResult best = MaxAffinityEntropy(
          AffinityKernel::FromSimilarity(BlockOnes(groups), p));
      const double expected = (1.0 - std::pow(c, -p)) / p;
      CHECK(std::abs(best.entropy - expected) < 1e-4);
      const VectorXd masses = GroupMasses(best.distribution, groups, c);
      CHECK((masses.array() - 1.0 / c).abs().maxCoeff() < 1e-4);
    }
  }
}

TEST_CASE("entropy depends only on group masses under clones") {
  std::mt19937_64 rng(32);
  const std::vector<int> groups{0, 1, 0, 2, 2, 0};
  const AffinityKernel kernel =
      AffinityKernel::FromSimilarity(BlockOnes(groups), 0.7);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd x = RandomSimplex(6, rng);
    // Redistribute mass inside every group.
    VectorXd y = VectorXd::Zero(6);
    const VectorXd masses = GroupMasses(x, groups, 3);
    for (int g = 0; g < 3; ++g) {
      std::vector<int> members;
      for (int a = 0; a < 6; ++a) {
        if (groups[a] == g) members.push_back(a);
      }
      const VectorXd w = RandomSimplex(static_cast<int>(members.size()), rng);
      for (std::size_t m = 0; m < members.size(); ++m) {
        y[members[m]] = masses[g] * w[m];
      }
    }
    CHECK(std::abs(AffinityEntropy(kernel, x) - AffinityEntropy(kernel, y)) <
          1e-10);
  }
}

TEST_CASE("default targets") {
  const Game dup = RockPaperScissorsDuplicateRock();
  const std::vector<VectorXd> affinity = AffinityTargets(dup);
  CHECK(std::abs(affinity[0][0] + affinity[0][3] - 1.0 / 3) < 1e-4);
  CHECK((affinity[1].array() - 1.0 / 3).abs().maxCoeff() < 1e-8);
  const std::vector<VectorXd> uniform = UniformTargets(dup);
  CHECK((uniform[0].array() - 0.25).abs().maxCoeff() == 0.0);
  KernelConfig factorized;
  factorized.dissimilarity = DissimilarityKind::kFactorized;
  CHECK((AffinityTargets(dup, factorized)[0] - affinity[0])
            .cwiseAbs()
            .maxCoeff() < 1e-8);
}

}  // namespace
}  // namespace eqrate
