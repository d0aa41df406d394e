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
#include <vector>

#include "doctest.h"
#include "eqrate/errors.h"
#include "eqrate/simulation.h"
#include "test_support.h"

namespace eqrate {
namespace {

using Eigen::VectorXd;

double At(const Game& g, int player, std::vector<int> index) {
  return g.Payoff(player, index);
}

SimConfig Small(SimMethod method, std::uint64_t seed) {
  SimConfig config;
  config.method = method;
  config.iterations = 4;
  config.trials = 2;
  config.candidate_prompts = 8;
  config.candidate_models = 4;
  config.seed = seed;
  return config;
}

TEST_CASE("skill utility and game") {
  const VectorXd p = (VectorXd(2) << 1.0, 0.0).finished();
  const VectorXd a = (VectorXd(2) << 0.7, 0.3).finished();
  const VectorXd b = (VectorXd(2) << 0.2, 0.8).finished();
  CHECK(SkillUtility(p, a, b) == doctest::Approx(0.5));
  CHECK(SkillUtility(p, b, a) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(SkillUtility(p, a, VectorXd::Zero(3)), DimensionError);

  const Game g = BuildSkillGame({p}, {a, b});
  CHECK(At(g, 1, {0, 0, 1}) == doctest::Approx(0.5));
  CHECK(At(g, 0, {0, 0, 1}) == doctest::Approx(0.5));
  CHECK(At(g, 2, {0, 0, 1}) == doctest::Approx(-0.5));
  CHECK(At(g, 0, {0, 1, 0}) == doctest::Approx(0.5));
  CHECK(At(g, 1, {0, 1, 0}) == doctest::Approx(-0.5));
  for (int m = 0; m < 2; ++m) {
    CHECK(At(g, 0, {0, m, m}) == 0.0);
    CHECK(At(g, 1, {0, m, m}) == 0.0);
    CHECK(At(g, 2, {0, m, m}) == -1.0);
  }
  CHECK_THROWS_AS(BuildSkillGame({p}, {a}), DimensionError);
}

TEST_CASE("dirichlet sampling") {
  std::mt19937_64 rng(17);
  const int s = 4;
  const int n = 100000;
  VectorXd mean = VectorXd::Zero(s);
  for (int k = 0; k < n; ++k) {
    const VectorXd x = SampleDirichlet(s, rng);
    CHECK((x.array() >= 0.0).all());
    CHECK(std::abs(x.sum() - 1.0) < 1e-12);
    mean += x;
  }
  mean /= n;
  // Dirichlet(1) marginal variance (S - 1) / (S^2 (S + 1)).
  const double sd = std::sqrt((s - 1.0) / (s * s * (s + 1.0)) / n);
  for (int j = 0; j < s; ++j) CHECK(std::abs(mean[j] - 1.0 / s) < 3.0 * sd);
}

TEST_CASE("skill entropy") {
  CHECK(SkillEntropy({VectorXd::Constant(4, 0.25)}) == doctest::Approx(std::log(4.0)));
  CHECK(SkillEntropy({VectorXd::Unit(4, 2)}) == 0.0);
  const VectorXd v = (VectorXd(3) << 1.0, 2.0, 5.0).finished();
  CHECK(SkillEntropy({v}) == doctest::Approx(SkillEntropy({7.0 * v})));
  CHECK(SkillEntropy({VectorXd::Unit(2, 0), VectorXd::Unit(2, 1)}) ==
        doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(SkillEntropy({}), ParameterError);
  CHECK_THROWS_AS(SkillEntropy({VectorXd::Zero(2)}), ParameterError);
}

TEST_CASE("single-skill worlds have zero entropy") {
  SimConfig config = Small(SimMethod::kEloSeparability, 3);
  config.num_skills = 1;
  config.iterations = 3;
  const Trajectory run = RunTrial(config, 0);
  REQUIRE_FALSE(run.aborted);
  for (const Snapshot& s : run.snapshots) {
    CHECK(s.prompt_entropy == 0.0);
    CHECK(s.model_entropy == 0.0);
  }
}

TEST_CASE("trial structure") {
  for (SimMethod method :
       {SimMethod::kEloSeparability, SimMethod::kNe, SimMethod::kCce}) {
    for (bool extra : {true, false}) {
      CAPTURE(SimMethodTag(method));
      CAPTURE(extra);
      SimConfig config = Small(method, 10);
      config.additional_prompts = extra;
      const Trajectory run = RunTrial(config, 1);
      REQUIRE_FALSE(run.aborted);
      CHECK(run.seed == 11);
      REQUIRE(run.snapshots.size() == 5);
      for (int t = 0; t <= 4; ++t) {
        const Snapshot& s = run.snapshots[t];
        CHECK(s.iteration == t);
        CHECK(s.num_models == 2 + t);
        CHECK(s.num_prompts == 10 + (extra ? t : 0));
        if (t > 0) {
          CHECK(s.acceptance_margin > 0.0);
          CHECK(s.model_rounds >= 1);
        }
      }
      const SkillWorld& w = run.world;
      REQUIRE(w.increments.size() == w.models.size());
      for (std::size_t k = 0; k < w.models.size(); ++k) {
        VectorXd total = VectorXd::Zero(w.num_skills);
        for (const VectorXd& d : w.increments[k]) total += d;
        CHECK((total - w.models[k]).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((w.models[k].array() >= 0.0).all());
      }
      for (std::size_t k = 2; k < w.models.size(); ++k) {
        CHECK(w.increments[k].size() ==
              static_cast<std::size_t>(run.snapshots[k - 1].model_rounds));
      }
    }
  }
}

TEST_CASE("simulation is reproducible") {
  const SimConfig config = Small(SimMethod::kNe, 21);
  const std::vector<Trajectory> a = RunSimulation(config);
  const std::vector<Trajectory> b = RunSimulation(config);
  REQUIRE(a.size() == 2);
  for (std::size_t t = 0; t < a.size(); ++t) {
    REQUIRE(a[t].world.models.size() == b[t].world.models.size());
    for (std::size_t k = 0; k < a[t].world.models.size(); ++k) {
      CHECK(a[t].world.models[k] == b[t].world.models[k]);
    }
    for (std::size_t k = 0; k < a[t].world.prompts.size(); ++k) {
      CHECK(a[t].world.prompts[k] == b[t].world.prompts[k]);
    }
  }
  const Trajectory single = RunTrial(config, 1);
  CHECK(single.world.models.back() == a[1].world.models.back());
  CHECK(a[0].world.models.back() != a[1].world.models.back());
}

TEST_CASE("entropy trace rows") {
  const std::vector<Trajectory> runs = RunSimulation(Small(SimMethod::kCce, 2));
  const std::vector<EntropyRow> rows = EntropyTrace(runs);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].method == "CCE");
  CHECK(rows[5].trial == 1);
  CHECK(rows[5].seed == 3);
  CHECK(rows[9].iteration == 4);
  CHECK(rows[9].num_models == 6);
  CHECK_THROWS_AS(EntropyTrace({}), ParameterError);
}

TEST_CASE("method tags and validation") {
  CHECK(ParseSimMethod("ELO") == SimMethod::kEloSeparability);
  CHECK(ParseSimMethod("NE") == SimMethod::kNe);
  CHECK(ParseSimMethod("CCE") == SimMethod::kCce);
  CHECK_THROWS_AS(ParseSimMethod("nash"), ParameterError);
  SimConfig config;
  config.num_skills = 0;
  CHECK_THROWS_AS(config.Validate(), ParameterError);
  config = SimConfig();
  config.iterations = -1;
  CHECK_THROWS_AS(RunTrial(config, 0), ParameterError);
}

TEST_CASE("signed-rank oracle used by the trend check") {
  // Enumerated by hand over the 2^5 sign patterns of ranks 1..5.
  CHECK(testing::WilcoxonSignedRankGreater({1, 2, 3, 4, 5}) ==
        doctest::Approx(1.0 / 32));
  CHECK(testing::WilcoxonSignedRankGreater({-1, 2, 3, 4, 5}) ==
        doctest::Approx(2.0 / 32));
  CHECK(testing::WilcoxonSignedRankGreater({-1, -2, -3, -4, -5}) ==
        doctest::Approx(1.0));
  // Zeros are dropped; tied magnitudes share rank 1.5.
  CHECK(testing::WilcoxonSignedRankGreater({0, 0, 1, -1}) ==
        doctest::Approx(0.75));
}

TEST_CASE("candidate loop guard") {
  SimConfig config = Small(SimMethod::kEloSeparability, 5);
  config.max_model_rounds = 1;
  config.iterations = 20;
  const Trajectory run = RunTrial(config, 0);
  // One increment is rarely enough to overtake the incumbents for long.
  if (run.aborted) {
    CHECK(run.diagnostics.find("no top-ranked candidate") != std::string::npos);
    CHECK(run.snapshots.size() < 21);
  } else {
    CHECK(run.snapshots.size() == 21);
  }
}

}  // namespace
}  // namespace eqrate
