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

// Shared helpers for the test binaries: random instances, brute-force
// oracles and a signed-rank test.

#ifndef EQRATE_TESTS_TEST_SUPPORT_H_
#define EQRATE_TESTS_TEST_SUPPORT_H_

#include <chrono>
#include <functional>
#include <random>
#include <vector>

#include "Eigen/Dense"
#include "eqrate/game.h"

namespace eqrate::testing {

// Payoffs i.i.d. uniform on [-1, 1].
Game RandomGame(const std::vector<int>& dims, std::mt19937_64& rng);

// Uniform draw from the probability simplex of the given size.
Eigen::VectorXd RandomSimplex(int size, std::mt19937_64& rng);

// Interior point with every entry at least `floor` before renormalising.
Eigen::VectorXd RandomInterior(int size, std::mt19937_64& rng,
                               double floor = 1e-3);

ProductProfile RandomProduct(const Game& game, std::mt19937_64& rng);
JointDistribution RandomJoint(const Game& game, std::mt19937_64& rng);

// Explicit sums over every pure profile.
double BruteExpectedUtility(const Game& game, const ProductProfile& profile,
                            int player);
Eigen::VectorXd BruteDeviationPayoff(const Game& game,
                                     const JointDistribution& profile,
                                     int player);

// Central differences of f at x with step h.
Eigen::VectorXd NumericGradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h = 1e-6);

// ||a - b|| / max(||a||, ||b||, floor).
double RelativeError(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                     double floor = 1e-8);

// Exact one-sided p-value of the Wilcoxon signed-rank test for the
// alternative that the differences tend to be positive. Zero differences are
// dropped and tied magnitudes get average ranks; the null distribution is
// enumerated over sign flips of the observed ranks.
double WilcoxonSignedRankGreater(const std::vector<double>& differences);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace eqrate::testing

#endif  // EQRATE_TESTS_TEST_SUPPORT_H_
