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

#include "eqrate/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "eqrate/errors.h"

namespace eqrate {
namespace {

using Eigen::Index;
using Eigen::VectorXd;

std::vector<double> ToList(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

VectorXd NumberArray(const Json& json, std::string_view what) {
  if (!json.is_array()) throw ParseError(std::string(what) + " must be an array");
  VectorXd v(json.size());
  for (size_t k = 0; k < json.size(); ++k) {
    if (!json[k].is_number()) {
      throw ParseError(std::string(what) + " must hold finite numbers");
    }
    v[k] = json[k].get<double>();
    if (!std::isfinite(v[k])) {
      throw ParseError(std::string(what) + " must hold finite numbers");
    }
  }
  return v;
}

const Json& Field(const Json& json, const char* key) {
  if (!json.is_object() || !json.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return json.at(key);
}

// Splits one CSV line; double quotes group commas and "" escapes a quote.
std::vector<std::string> SplitCsvLine(const std::string& line, int number) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) {
    throw ParseError("line " + std::to_string(number) + ": unterminated quote");
  }
  return fields;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json ParseJsonText(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json TraceToJson(const std::vector<TraceRecord>& trace) {
  Json out = Json::array();
  for (const TraceRecord& r : trace) {
    Json row = {{"step", r.step},
                {"tau", r.tau},
                {"loss", r.loss},
                {"exploitability", r.exploitability}};
    if (!r.marginals.empty()) {
      Json m = Json::array();
      for (const VectorXd& x : r.marginals) m.push_back(ToList(x));
      row["marginals"] = std::move(m);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

Json GameToJson(const Game& game, const std::vector<int>* clone_source) {
  Json json;
  json["players"] = game.player_names();
  Json actions = Json::array();
  Json utilities = Json::array();
  for (int i = 0; i < game.num_players(); ++i) {
    actions.push_back(game.action_labels(i));
    utilities.push_back(ToList(game.utility(i)));
  }
  json["actions"] = std::move(actions);
  json["shape"] = game.shape().dims();
  json["utilities"] = std::move(utilities);
  if (clone_source != nullptr) json["clone_source"] = *clone_source;
  return json;
}

Game GameFromJson(const Json& json, std::vector<int>* clone_source) {
  try {
    const auto players = Field(json, "players").get<std::vector<std::string>>();
    const auto actions =
        Field(json, "actions").get<std::vector<std::vector<std::string>>>();
    const Json& utils = Field(json, "utilities");
    if (!utils.is_array()) throw ParseError("utilities must be an array");
    std::vector<VectorXd> utilities;
    for (const Json& u : utils) utilities.push_back(NumberArray(u, "utilities"));
    if (json.contains("shape")) {
      const auto shape = json.at("shape").get<std::vector<int>>();
      if (shape.size() != actions.size()) {
        throw DimensionError("shape and actions disagree");
      }
      for (size_t i = 0; i < shape.size(); ++i) {
        if (shape[i] != static_cast<int>(actions[i].size())) {
          throw DimensionError("shape and actions disagree");
        }
      }
    }
    Game game(players, actions, std::move(utilities));
    if (clone_source != nullptr) {
      if (json.contains("clone_source")) {
        *clone_source = json.at("clone_source").get<std::vector<int>>();
      } else {
        clone_source->assign(game.num_actions(0), -1);
      }
      if (static_cast<int>(clone_source->size()) != game.num_actions(0)) {
        throw DimensionError("clone_source needs one entry per prompt");
      }
    }
    return game;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed game JSON: ") + e.what());
  }
}

void WriteGame(const std::string& path, const Game& game,
               const std::vector<int>* clone_source) {
  WriteFileAtomic(path, GameToJson(game, clone_source).dump(1) + "\n");
}

Game ReadGame(const std::string& path, std::vector<int>* clone_source) {
  return GameFromJson(ParseJsonText(ReadFile(path), path), clone_source);
}

KothGame ReadKoth(const std::string& path) {
  std::vector<int> clone_source;
  Game game = ReadGame(path, &clone_source);
  if (game.num_players() != 3) {
    throw DimensionError(path + " is not a (prompt, king, rebel) game");
  }
  return {std::move(game), std::move(clone_source)};
}

std::vector<PreferenceRecord> ParsePreferenceCsv(std::istream& in) {
  std::vector<PreferenceRecord> records;
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) continue;
    const std::vector<std::string> fields = SplitCsvLine(line, number);
    if (!header) {
      if (fields != std::vector<std::string>{"prompt_id", "model_a", "model_b",
                                             "score"}) {
        throw ParseError("expected header prompt_id,model_a,model_b,score");
      }
      header = true;
      continue;
    }
    if (fields.size() != 4) {
      throw ParseError("line " + std::to_string(number) + ": expected 4 fields");
    }
    PreferenceRecord r{fields[0], fields[1], fields[2], 0.0};
    const std::string& s = fields[3];
    const char* begin = s.data() + (s.rfind('+', 0) == 0 ? 1 : 0);
    const auto [end, ec] = std::from_chars(begin, s.data() + s.size(), r.score);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ParseError("line " + std::to_string(number) + ": bad score '" + s +
                       "'");
    }
    try {
      CheckPreferenceScore(r.score);
    } catch (const ParameterError&) {
      throw ParseError("line " + std::to_string(number) + ": score " + s +
                       " is not in {-1, -0.5, 0, 0.5, 1}");
    }
    records.push_back(std::move(r));
  }
  if (!header) throw ParseError("empty preference file");
  return records;
}

std::vector<PreferenceRecord> ReadPreferenceCsv(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ParsePreferenceCsv(in);
}

Json EquilibriumToJson(const Game& game, const EquilibriumResult& result) {
  Json json;
  json["kind"] = result.is_product() ? "product" : "joint";
  json["players"] = game.player_names();
  Json actions = Json::array();
  for (int i = 0; i < game.num_players(); ++i) {
    actions.push_back(game.action_labels(i));
  }
  json["actions"] = std::move(actions);
  Json marginals = Json::array();
  for (int i = 0; i < game.num_players(); ++i) {
    marginals.push_back(ToList(result.is_product()
                                   ? result.product().marginal(i)
                                   : result.joint().Marginal(i)));
  }
  json["marginals"] = std::move(marginals);
  if (!result.is_product()) {
    json["shape"] = game.shape().dims();
    json["joint"] = ToList(result.joint().joint());
  }
  json["exploitability"] = result.exploitability;
  json["converged"] = result.converged;
  json["steps"] = result.steps;
  if (result.is_product()) json["final_tau"] = result.final_tau;
  if (!result.duals.empty()) {
    Json duals = Json::array();
    for (const VectorXd& a : result.duals) duals.push_back(ToList(a));
    json["duals"] = std::move(duals);
  }
  json["trace"] = TraceToJson(result.trace);
  return json;
}

EquilibriumResult EquilibriumFromJson(const Game& game, const Json& json) {
  try {
    EquilibriumResult result;
    const std::string kind = Field(json, "kind").get<std::string>();
    if (kind == "product") {
      const Json& m = Field(json, "marginals");
      if (!m.is_array() || static_cast<int>(m.size()) != game.num_players()) {
        throw DimensionError("equilibrium does not match game");
      }
      std::vector<VectorXd> marginals;
      for (int i = 0; i < game.num_players(); ++i) {
        marginals.push_back(NumberArray(m[i], "marginals"));
        if (marginals.back().size() != game.num_actions(i)) {
          throw DimensionError("equilibrium does not match game");
        }
      }
      result.profile = ProductProfile(std::move(marginals));
      result.final_tau = json.value("final_tau", 0.0);
    } else if (kind == "joint") {
      VectorXd joint = NumberArray(Field(json, "joint"), "joint");
      if (joint.size() != game.num_profiles()) {
        throw DimensionError("equilibrium does not match game");
      }
      result.profile = JointDistribution(std::move(joint), game.shape());
    } else {
      throw ParseError("unknown equilibrium kind '" + kind + "'");
    }
    result.exploitability = json.value("exploitability", 0.0);
    result.converged = json.value("converged", false);
    result.steps = json.value("steps", 0);
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed equilibrium JSON: ") + e.what());
  }
}

Json RatingReportToJson(const RatingReport& report) {
  Json json;
  json["method"] = std::string(MethodTag(report.method));
  json["tie_tolerance"] = report.tie_tolerance;
  Json players = Json::array();
  for (const PlayerRatings& p : report.players) {
    Json entry;
    entry["player"] = p.player;
    Json actions = Json::array();
    for (int k : p.DisplayOrder()) {
      Json a = {{"label", p.labels[k]},
                {"rating", p.ratings[k]},
                {"rank", p.ranks[k]}};
      if (p.masses.size() > 0) a["mass"] = p.masses[k];
      actions.push_back(std::move(a));
    }
    entry["actions"] = std::move(actions);
    players.push_back(std::move(entry));
  }
  json["players"] = std::move(players);
  return json;
}

std::string RatingReportCsv(const RatingReport& report) {
  std::string out = "player,label,rating,mass,rank\n";
  for (const PlayerRatings& p : report.players) {
    for (int k : p.DisplayOrder()) {
      out += CsvField(p.player) + "," + CsvField(p.labels[k]) + "," +
             FormatDouble(p.ratings[k]) + "," +
             (p.masses.size() > 0 ? FormatDouble(p.masses[k]) : "") + "," +
             std::to_string(p.ranks[k]) + "\n";
    }
  }
  return out;
}

std::string DecompositionCsv(const DecompositionTable& table) {
  const bool grouped = !table.families.empty();
  std::string out =
      grouped ? "label,contribution,family\n" : "label,contribution\n";
  for (Index a = 0; a < table.contributions.size(); ++a) {
    out += CsvField(table.co_labels[a]) + "," +
           FormatDouble(table.contributions[a]);
    if (grouped) out += "," + CsvField(table.families[a]);
    out += "\n";
  }
  if (grouped) {
    out += "\nfamily,subtotal\n";
    for (const auto& [family, sum] : table.family_sums) {
      out += CsvField(family) + "," + FormatDouble(sum) + "\n";
    }
  }
  out += "\ntotal,rating\n" + FormatDouble(table.contributions.sum()) + "," +
         FormatDouble(table.rating) + "\n";
  return out;
}

std::string MatrixCsv(const std::vector<std::string>& labels,
                      const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != static_cast<Index>(labels.size()) ||
      matrix.cols() != static_cast<Index>(labels.size())) {
    throw DimensionError("matrix and labels disagree");
  }
  std::string out = "label";
  for (const std::string& l : labels) out += "," + CsvField(l);
  out += "\n";
  for (Index r = 0; r < matrix.rows(); ++r) {
    out += CsvField(labels[r]);
    for (Index c = 0; c < matrix.cols(); ++c) {
      out += "," + FormatDouble(matrix(r, c));
    }
    out += "\n";
  }
  return out;
}

std::string EntropyTraceCsv(const std::vector<EntropyRow>& rows) {
  std::string out =
      "iteration,num_prompts,num_models,prompt_entropy,model_entropy,method,"
      "trial,seed\n";
  for (const EntropyRow& r : rows) {
    out += std::to_string(r.iteration) + "," + std::to_string(r.num_prompts) +
           "," + std::to_string(r.num_models) + "," +
           FormatDouble(r.prompt_entropy) + "," +
           FormatDouble(r.model_entropy) + "," + r.method + "," +
           std::to_string(r.trial) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

Json TrajectoryToJson(const Trajectory& run) {
  Json json;
  json["method"] = std::string(SimMethodTag(run.method));
  json["trial"] = run.trial;
  json["seed"] = run.seed;
  json["aborted"] = run.aborted;
  if (!run.diagnostics.empty()) json["diagnostics"] = run.diagnostics;
  json["solves"] = run.solves;
  json["unconverged_solves"] = run.unconverged_solves;
  json["unconverged_targets"] = run.unconverged_targets;
  Json snapshots = Json::array();
  for (const Snapshot& s : run.snapshots) {
    snapshots.push_back({{"iteration", s.iteration},
                         {"num_prompts", s.num_prompts},
                         {"num_models", s.num_models},
                         {"prompt_entropy", s.prompt_entropy},
                         {"model_entropy", s.model_entropy},
                         {"model_rounds", s.model_rounds},
                         {"acceptance_margin", s.acceptance_margin}});
  }
  json["snapshots"] = std::move(snapshots);
  Json prompts = Json::array();
  for (const VectorXd& p : run.world.prompts) prompts.push_back(ToList(p));
  json["prompts"] = std::move(prompts);
  Json models = Json::array();
  for (size_t k = 0; k < run.world.models.size(); ++k) {
    Json increments = Json::array();
    for (const VectorXd& d : run.world.increments[k]) {
      increments.push_back(ToList(d));
    }
    models.push_back({{"vector", ToList(run.world.models[k])},
                      {"increments", std::move(increments)}});
  }
  json["models"] = std::move(models);
  return json;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileAtomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + temp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("cannot write " + temp.string());
  }
  fs::rename(temp, target);
}

std::string Fnv1a64Hex(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace eqrate
