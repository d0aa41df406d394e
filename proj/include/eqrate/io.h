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

// File formats: game JSON, preference CSV, solver results, rating reports and
// plot-ready CSV tables. Every writer replaces its target atomically.

#ifndef EQRATE_IO_H_
#define EQRATE_IO_H_

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Dense"
#include "eqrate/game.h"
#include "eqrate/gamification.h"
#include "eqrate/ratings.h"
#include "eqrate/simulation.h"
#include "eqrate/solvers.h"
#include "json.hpp"

namespace eqrate {

using Json = nlohmann::ordered_json;

// {"players": [...], "actions": [[...], ...], "shape": [...],
//  "utilities": [[row-major u_0], ...], "clone_source": [...]?}
Json GameToJson(const Game& game, const std::vector<int>* clone_source = nullptr);
// Fills clone_source when given: the stored array, or all -1 if absent.
Game GameFromJson(const Json& json, std::vector<int>* clone_source = nullptr);

void WriteGame(const std::string& path, const Game& game,
               const std::vector<int>* clone_source = nullptr);
Game ReadGame(const std::string& path, std::vector<int>* clone_source = nullptr);
// A game file read as a king-of-the-hill game.
KothGame ReadKoth(const std::string& path);

// Header prompt_id,model_a,model_b,score. Fields may be double-quoted.
std::vector<PreferenceRecord> ParsePreferenceCsv(std::istream& in);
std::vector<PreferenceRecord> ReadPreferenceCsv(const std::string& path);

Json EquilibriumToJson(const Game& game, const EquilibriumResult& result);
// Restores the profile and summary fields; traces are not read back.
EquilibriumResult EquilibriumFromJson(const Game& game, const Json& json);

Json RatingReportToJson(const RatingReport& report);
// player,label,rating,mass,rank in display order.
std::string RatingReportCsv(const RatingReport& report);

// label,contribution,family then family,subtotal rows and a total row.
std::string DecompositionCsv(const DecompositionTable& table);

// Square matrix with a label header row and column.
std::string MatrixCsv(const std::vector<std::string>& labels,
                      const Eigen::MatrixXd& matrix);

// iteration,num_prompts,num_models,prompt_entropy,model_entropy,method,
// trial,seed
std::string EntropyTraceCsv(const std::vector<EntropyRow>& rows);
Json TrajectoryToJson(const Trajectory& run);

std::string ReadFile(const std::string& path);
// Writes to a sibling temporary file, then renames it over `path`.
void WriteFileAtomic(const std::string& path, std::string_view contents);

// FNV-1a, 64 bit, as 16 lowercase hex digits.
std::string Fnv1a64Hex(std::string_view data);

// Shortest text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace eqrate

#endif  // EQRATE_IO_H_
