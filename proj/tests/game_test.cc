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
#include <limits>
#include <random>

#include "doctest.h"
#include "eqrate/errors.h"
#include "eqrate/game.h"
#include "eqrate/toy_games.h"
#include "test_support.h"

namespace eqrate {
namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;
using testing::RandomGame;
using testing::RandomJoint;
using testing::RandomProduct;

ProductProfile ChickenMixed() {
  const Vector2d x(11.0 / 12.0, 1.0 / 12.0);
  return ProductProfile({x, x});
}

ProductProfile Pure(const Game& game, std::vector<int> actions) {
  return ProductProfile::Pure(game, actions);
}

std::vector<int> RandomDims(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> players(2, 3);
  std::uniform_int_distribution<int> actions(1, 4);
  std::vector<int> dims(players(rng));
  for (int& d : dims) d = actions(rng);
  return dims;
}

TEST_CASE("tensor shape ravels and unravels") {
  const TensorShape shape({2, 3, 4});
  CHECK(shape.size() == 24);
  CHECK(shape.inner(0) == 12);
  CHECK(shape.inner(2) == 1);
  CHECK(shape.outer(1) == 2);
  for (Eigen::Index k = 0; k < shape.size(); ++k) {
    CHECK(shape.Ravel(shape.Unravel(k)) == k);
  }
  const std::vector<int> index{1, 2, 3};
  CHECK(shape.Ravel(index) == 23);
  CHECK(shape.Without(1) == TensorShape({2, 4}));
  CHECK_THROWS_AS(TensorShape({2, 0}), DimensionError);
}

TEST_CASE("contractions agree with explicit loops") {
  std::mt19937_64 rng(3);
  const Game game = RandomGame({2, 3, 4}, rng);
  const ProductProfile x = RandomProduct(game, rng);
  const VectorXd& u = game.utility(0);
  for (int keep = 0; keep < 3; ++keep) {
    const VectorXd fast = ContractAllBut(u, game.shape(), x.marginals(), keep);
    VectorXd slow = VectorXd::Zero(game.num_actions(keep));
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      const std::vector<int> a = game.shape().Unravel(k);
      double w = 1.0;
      for (int j = 0; j < 3; ++j) {
        if (j != keep) w *= x.marginal(j)[a[j]];
      }
      slow[a[keep]] += w * u[k];
    }
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
  }
  const VectorXd summed = SumAxis(u, game.shape(), 1);
  const VectorXd back = BroadcastAlong(summed, game.shape(), 1);
  CHECK(back.size() == u.size());
  CHECK(std::abs(summed.sum() - u.sum()) < 1e-12);
}

TEST_CASE("game construction validates its inputs") {
  const VectorXd four = VectorXd::Zero(4);
  CHECK_THROWS_AS(Game({"a", "b"}, {{"x", "y"}, {"x", "y"}}, {four}),
                  DimensionError);
  CHECK_THROWS_AS(Game({"a", "b"}, {{"x", "x"}, {"x", "y"}}, {four, four}),
                  ParameterError);
  CHECK_THROWS_AS(
      Game({"a", "b"}, {{"x", "y"}, {"x", "y"}}, {four, VectorXd::Zero(3)}),
      DimensionError);
  VectorXd bad = four;
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Game({"a", "b"}, {{"x", "y"}, {"x", "y"}}, {four, bad}),
                  ParameterError);
  bad[2] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Game({"a", "b"}, {{"x", "y"}, {"x", "y"}}, {four, bad}),
                  ParameterError);
}

TEST_CASE("profiles validate the simplex") {
  CHECK_THROWS_AS(ProductProfile({Vector2d(0.6, 0.6)}), ParameterError);
  CHECK_THROWS_AS(ProductProfile({Vector2d(1.5, -0.5)}), ParameterError);
  const Game rps = RockPaperScissors();
  const ProductProfile wrong({Vector2d(0.5, 0.5), Vector2d(0.5, 0.5)});
  CHECK_THROWS_AS(ExpectedUtility(rps, wrong, 0), DimensionError);
  CHECK_THROWS_AS(
      JointDistribution(VectorXd::Constant(9, 1.0 / 9), TensorShape({3, 2})),
      DimensionError);
}

TEST_CASE("expected utility examples") {
  const Game rps = RockPaperScissors();
  CHECK(ExpectedUtility(rps, ProductProfile::Uniform(rps), 0) ==
        doctest::Approx(0.0));
  const Game chicken = Chicken();
  CHECK(ExpectedUtility(chicken, ChickenMixed(), 0) ==
        doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
  const Game single({"a", "b"}, {{"only"}, {"only"}},
                    {VectorXd::Constant(1, 3.5), VectorXd::Constant(1, -1.0)});
  CHECK(ExpectedUtility(single, ProductProfile::Uniform(single), 0) == 3.5);
}

TEST_CASE("deviation payoff examples") {
  const Game rps = RockPaperScissors();
  CHECK(DeviationPayoff(rps, ProductProfile::Uniform(rps), 0)
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  const Game chicken = Chicken();
  const VectorXd swerve = DeviationPayoff(chicken, Pure(chicken, {0, 0}), 0);
  CHECK(swerve[0] == 0.0);
  CHECK(swerve[1] == 1.0);
  VectorXd u1(4);
  u1 << 1, 2, 3, 4;
  const Game g({"row", "col"}, {{"r0", "r1"}, {"c0", "c1"}},
               {u1, VectorXd::Zero(4)});
  const VectorXd dev = DeviationPayoff(g, Pure(g, {0, 1}), 0);
  CHECK(dev[0] == 2.0);
  CHECK(dev[1] == 4.0);
}

TEST_CASE("regret examples") {
  const Game rps = RockPaperScissors();
  CHECK(Regrets(rps, ProductProfile::Uniform(rps), 0).cwiseAbs().maxCoeff() <
        1e-15);
  const Game chicken = Chicken();
  for (int i = 0; i < 2; ++i) {
    CHECK(Regrets(chicken, ChickenMixed(), i).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(Regret(chicken, Pure(chicken, {0, 0}), 0, 1) == 1.0);
}

TEST_CASE("exploitability examples") {
  const Game rps = RockPaperScissors();
  CHECK(Exploitability(rps, ProductProfile::Uniform(rps)) < 1e-15);
  const Game chicken = Chicken();
  // Each player moves from -12 to -1 by swerving.
  CHECK(Exploitability(chicken, Pure(chicken, {1, 1})) == 22.0);
  CHECK(Exploitability(chicken, ChickenMixed()) < 1e-6);
  CHECK(Exploitability(chicken, Pure(chicken, {0, 1})) == 0.0);
  CHECK(Exploitability(chicken, Pure(chicken, {0, 0})) == 2.0);
}

TEST_CASE("expected utility matches the brute-force sum") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Game game = RandomGame(RandomDims(rng), rng);
    const ProductProfile x = RandomProduct(game, rng);
    for (int i = 0; i < game.num_players(); ++i) {
      CHECK(std::abs(ExpectedUtility(game, x, i) -
                     testing::BruteExpectedUtility(game, x, i)) < 1e-12);
    }
    const JointDistribution joint = RandomJoint(game, rng);
    for (int i = 0; i < game.num_players(); ++i) {
      const VectorXd dev = DeviationPayoff(game, joint, i);
      CHECK((dev - testing::BruteDeviationPayoff(game, joint, i))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("expected utility is the marginal-weighted deviation payoff") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Game game = RandomGame(RandomDims(rng), rng);
    const ProductProfile x = RandomProduct(game, rng);
    for (int i = 0; i < game.num_players(); ++i) {
      const double lhs = ExpectedUtility(game, x, i);
      const double rhs = x.marginal(i).dot(DeviationPayoff(game, x, i));
      CHECK(std::abs(lhs - rhs) < 1e-10);
      CHECK(std::abs(x.marginal(i).dot(Regrets(game, x, i))) < 1e-10);
    }
  }
}

TEST_CASE("regret is invariant to a constant payoff shift") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Game game = RandomGame(RandomDims(rng), rng);
    std::vector<VectorXd> shifted;
    for (int i = 0; i < game.num_players(); ++i) {
      shifted.push_back(game.utility(i).array() + shift(rng));
    }
    std::vector<std::vector<std::string>> labels;
    for (int i = 0; i < game.num_players(); ++i) {
      labels.push_back(game.action_labels(i));
    }
    const Game moved(game.player_names(), labels, shifted);
    const ProductProfile x = RandomProduct(game, rng);
    const JointDistribution joint = RandomJoint(game, rng);
    for (int i = 0; i < game.num_players(); ++i) {
      CHECK((Regrets(game, x, i) - Regrets(moved, x, i)).cwiseAbs().maxCoeff() <
            1e-10);
      CHECK((Regrets(game, joint, i) - Regrets(moved, joint, i))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("factorised joints agree with product profiles") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const Game game = RandomGame(RandomDims(rng), rng);
    const ProductProfile x = RandomProduct(game, rng);
    const JointDistribution joint = JointDistribution::FromProduct(x);
    for (int i = 0; i < game.num_players(); ++i) {
      CHECK((joint.Marginal(i) - x.marginal(i)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(ExpectedUtility(game, x, i) -
                     ExpectedUtility(game, joint, i)) < 1e-10);
      CHECK((DeviationPayoff(game, x, i) - DeviationPayoff(game, joint, i))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
    CHECK(std::abs(Exploitability(game, x) - Exploitability(game, joint)) <
          1e-10);
  }
}

TEST_CASE("exploitability is nonnegative") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const Game game = RandomGame(RandomDims(rng), rng);
    CHECK(Exploitability(game, RandomProduct(game, rng)) >= 0.0);
    CHECK(Exploitability(game, RandomJoint(game, rng)) >= 0.0);
  }
}

TEST_CASE("cloning an action copies its payoffs") {
  const Game rps = RockPaperScissors();
  const Game dup = CloneAction(rps, 0, 0);
  CHECK(dup.num_actions(0) == 4);
  CHECK(dup.action_labels(0)[3] == "Rock~1");
  for (int b = 0; b < 3; ++b) {
    for (int i = 0; i < 2; ++i) {
      const std::vector<int> rock{0, b};
      const std::vector<int> copy{3, b};
      CHECK(dup.Payoff(i, rock) == dup.Payoff(i, copy));
    }
  }
  CHECK(dup.ActionIndex(0, "Paper") == 1);
  CHECK_THROWS_AS(dup.ActionIndex(0, "Lizard"), ParameterError);
}

}  // namespace
}  // namespace eqrate
