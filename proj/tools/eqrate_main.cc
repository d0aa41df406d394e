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

// eqrate: build evaluation games, solve for equilibria, rate actions and run
// the clone and skill-world experiments. Every command writes its outputs and
// a manifest.json into --out (default $EQRATE_OUT_DIR, else ./out).

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eqrate/errors.h"
#include "eqrate/game.h"
#include "eqrate/gamification.h"
#include "eqrate/io.h"
#include "eqrate/kernels.h"
#include "eqrate/ratings.h"
#include "eqrate/simulation.h"
#include "eqrate/solvers.h"
#include "eqrate/toy_games.h"

namespace eqrate {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNotConverged = 3;

// Output directory, manifest and outcome of one command.
class Run {
 public:
  Run(std::string command, std::string out_dir, std::uint64_t seed)
      : start_(std::chrono::steady_clock::now()), out_dir_(std::move(out_dir)) {
    manifest_["command"] = std::move(command);
    manifest_["seed"] = seed;
    manifest_["config"] = Json::object();
    manifest_["inputs"] = Json::object();
    manifest_["outputs"] = Json::array();
    manifest_["solvers"] = Json::array();
  }

  Json& config() { return manifest_["config"]; }

  std::string Input(const std::string& path) {
    std::string data = ReadFile(path);
    manifest_["inputs"][path] = Fnv1a64Hex(data);
    return data;
  }

  std::string Path(const std::string& name) const {
    return out_dir_ + "/" + name;
  }

  void Emit(const std::string& name, const std::string& contents) {
    const std::string path = Path(name);
    WriteFileAtomic(path, contents);
    manifest_["outputs"].push_back(
        {{"path", path}, {"fnv1a64", Fnv1a64Hex(contents)}});
  }
  void Emit(const std::string& name, const Json& json) {
    Emit(name, json.dump(1) + "\n");
  }

  void Solver(const std::string& label, const EquilibriumResult& r) {
    manifest_["solvers"].push_back({{"label", label},
                                    {"converged", r.converged},
                                    {"steps", r.steps},
                                    {"exploitability", r.exploitability},
                                    {"final_tau", r.final_tau}});
    if (!r.converged) converged_ = false;
  }
  void NotConverged() { converged_ = false; }

  int Finish() {
    manifest_["converged"] = converged_;
    manifest_["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    WriteFileAtomic(Path("manifest.json"), manifest_.dump(1) + "\n");
    return converged_ ? kExitOk : kExitNotConverged;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::string out_dir_;
  Json manifest_;
  bool converged_ = true;
};

struct CommonFlags {
  std::string out_dir;
  std::uint64_t seed = 0;
};

struct SolveFlags {
  std::string method = "ne";
  std::string entropy = "affinity";
  double tau_init = 1.0;
  double tau_decay = 0.95;
  int anneal_interval = 250;
  double anneal_gate = 1e-5;
  double tau_terminal = 1e-2;
  double epsilon = 1e-3;
  double learning_rate = 1e-2;
  int max_steps = 200000;
  double cce_epsilon = 1e-4;
  int cce_max_steps = 100000;
  double entropic_index = 1.0;
  double variance = kDefaultKernelVariance;
  std::string dissimilarity = "joint";
};

void AddSolveFlags(CLI::App* app, SolveFlags* f, bool with_epsilon = true) {
  app->add_option("--tau-init", f->tau_init, "Initial QRE temperature");
  app->add_option("--tau-decay", f->tau_decay, "Temperature decay factor");
  app->add_option("--anneal-interval", f->anneal_interval,
                  "Gradient steps between annealing checks");
  app->add_option("--anneal-gate", f->anneal_gate,
                  "Anneal only when the QRE loss is at most this");
  app->add_option("--tau-terminal", f->tau_terminal, "Final temperature");
  if (with_epsilon) {
    app->add_option("--epsilon", f->epsilon, "Stop at this exploitability");
  }
  app->add_option("--lr", f->learning_rate, "Adam learning rate");
  app->add_option("--max-steps", f->max_steps, "NE step budget");
  app->add_option("--cce-epsilon", f->cce_epsilon,
                  "CCE regret and slackness tolerance");
  app->add_option("--cce-max-steps", f->cce_max_steps, "CCE step budget");
  app->add_option("--entropic-index", f->entropic_index,
                  "Affinity entropy index p in (0, 1]");
  app->add_option("--variance", f->variance, "Kernel variance (2 sigma)^2");
  app->add_option("--dissimilarity", f->dissimilarity, "joint | factorized")
      ->check(CLI::IsMember({"joint", "factorized"}));
}

KernelConfig KernelFrom(const SolveFlags& f) {
  KernelConfig k;
  k.entropic_index = f.entropic_index;
  k.variance = f.variance;
  k.dissimilarity = f.dissimilarity == "factorized"
                        ? DissimilarityKind::kFactorized
                        : DissimilarityKind::kJoint;
  return k;
}

QREConfig QreFrom(const SolveFlags& f) {
  QREConfig c;
  c.tau_init = f.tau_init;
  c.tau_decay = f.tau_decay;
  c.anneal_check_interval = f.anneal_interval;
  c.anneal_gate = f.anneal_gate;
  c.tau_terminal = f.tau_terminal;
  c.epsilon_ne = f.epsilon;
  c.learning_rate = f.learning_rate;
  c.max_steps = f.max_steps;
  return c;
}

CCEConfig CceFrom(const SolveFlags& f) {
  CCEConfig c;
  c.learning_rate = f.learning_rate;
  c.epsilon_cce = f.cce_epsilon;
  c.max_steps = f.cce_max_steps;
  return c;
}

Json EchoSolve(const SolveFlags& f) {
  return {{"method", f.method},
          {"entropy", f.entropy},
          {"tau_init", f.tau_init},
          {"tau_decay", f.tau_decay},
          {"anneal_interval", f.anneal_interval},
          {"anneal_gate", f.anneal_gate},
          {"tau_terminal", f.tau_terminal},
          {"epsilon", f.epsilon},
          {"lr", f.learning_rate},
          {"max_steps", f.max_steps},
          {"cce_epsilon", f.cce_epsilon},
          {"cce_max_steps", f.cce_max_steps},
          {"entropic_index", f.entropic_index},
          {"variance", f.variance},
          {"dissimilarity", f.dissimilarity}};
}

RatingMethod MethodFor(bool cce, bool shannon) {
  if (cce) return shannon ? RatingMethod::kCceShannon : RatingMethod::kCce;
  return shannon ? RatingMethod::kNeShannon : RatingMethod::kNe;
}

// Solves with the requested targets; a budget overrun yields the last
// iterate, marked unconverged.
EquilibriumResult SolveWith(const Game& game, bool cce, bool shannon,
                            const SolveFlags& f) {
  const std::vector<Eigen::VectorXd> targets =
      shannon ? UniformTargets(game) : AffinityTargets(game, KernelFrom(f));
  try {
    if (cce) {
      CCEConfig c = CceFrom(f);
      c.target_log_joint = ProductTargetLogJoint(game, targets);
      return SolveMreCce(game, c);
    }
    QREConfig c = QreFrom(f);
    c.targets = targets;
    return SolveLle(game, c);
  } catch (const SolverConvergenceError& e) {
    return e.partial();
  }
}

std::vector<int> ParseCounts(const std::string& text) {
  std::vector<int> counts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const int value = std::stoi(item, &used);
    if (used != item.size() || value < 0) {
      throw ParameterError("bad clone count '" + item + "'");
    }
    counts.push_back(value);
  }
  if (counts.empty()) throw ParameterError("no clone counts given");
  return counts;
}

int CmdBuild(const CommonFlags& common, const std::string& prefs,
             const std::string& game_path) {
  Run run("build", common.out_dir, common.seed);
  KothGame koth = [&] {
    if (!prefs.empty()) {
      run.config()["prefs"] = prefs;
      std::istringstream in(run.Input(prefs));
      return BuildKoth(ParsePreferenceCsv(in));
    }
    run.config()["game"] = game_path;
    run.Input(game_path);
    return ReadKoth(game_path);
  }();
  run.Emit("game.json", GameToJson(koth.game, &koth.clone_source) );
  Json report;
  report["prompts"] = koth.num_prompts();
  report["models"] = koth.num_models();
  report["cells"] = static_cast<long long>(koth.game.num_profiles());
  if (!prefs.empty()) {
    std::istringstream in(ReadFile(prefs));
    report["records"] = ParsePreferenceCsv(in).size();
  }
  run.Emit("build_report.json", report);
  return run.Finish();
}

int CmdSolve(const CommonFlags& common, const std::string& game_path,
             const SolveFlags& flags) {
  Run run("solve", common.out_dir, common.seed);
  run.config() = EchoSolve(flags);
  run.config()["game"] = game_path;
  run.Input(game_path);
  const Game game = ReadGame(game_path);
  const bool cce = flags.method == "cce";
  const bool shannon = flags.entropy == "shannon";
  const EquilibriumResult result = SolveWith(game, cce, shannon, flags);
  Json json = EquilibriumToJson(game, result);
  json["method"] = std::string(MethodTag(MethodFor(cce, shannon)));
  json["config"] = run.config();
  json["seed"] = common.seed;
  run.Emit("equilibrium.json", json);
  run.Solver(flags.method, result);
  const RatingReport report = Rate(game, result.AsJoint(),
                                   MethodFor(cce, shannon));
  run.Emit("ratings.csv", RatingReportCsv(report));
  if (!result.converged) {
    std::cerr << "solver did not converge; trace in "
              << run.Path("equilibrium.json") << "\n";
  }
  return run.Finish();
}

int CmdRate(const CommonFlags& common, const std::string& game_path,
            const std::string& equilibrium_path, const std::string& method,
            double tie_tolerance) {
  Run run("rate", common.out_dir, common.seed);
  run.config() = {{"game", game_path},
                  {"equilibrium", equilibrium_path},
                  {"method", method},
                  {"tie_tolerance", tie_tolerance}};
  run.Input(game_path);
  RatingReport report;
  if (method == "elo") {
    const KothGame koth = ReadKoth(game_path);
    report = EloReport("king", koth.models(), KothElo(koth), tie_tolerance);
  } else {
    if (equilibrium_path.empty()) {
      throw ParameterError("rate needs --equilibrium or --method elo");
    }
    const Game game = ReadGame(game_path);
    const Json json = Json::parse(run.Input(equilibrium_path));
    const EquilibriumResult result = EquilibriumFromJson(game, json);
    const RatingMethod tag = ParseMethodTag(json.value(
        "method", std::string(result.is_product() ? "NE" : "CCE")));
    report = Rate(game, result.AsJoint(), tag, tie_tolerance);
  }
  run.Emit("ratings.csv", RatingReportCsv(report));
  run.Emit("ratings.json", RatingReportToJson(report));
  return run.Finish();
}

int CmdCloneTest(const CommonFlags& common, const std::string& game_path,
                 const std::string& target, double lambda,
                 const std::string& counts_text, double noise,
                 const SolveFlags& flags) {
  Run run("clone-test", common.out_dir, common.seed);
  run.config() = EchoSolve(flags);
  run.config()["game"] = game_path;
  run.config()["target"] = target;
  run.config()["lambda"] = lambda;
  run.config()["counts"] = counts_text;
  run.config()["noise"] = noise;
  run.Input(game_path);
  const KothGame base = ReadKoth(game_path);
  const std::vector<int> counts = ParseCounts(counts_text);
  int largest = 0;
  for (int c : counts) largest = std::max(largest, c);
  // Nested: the clones injected at count c are a prefix of those at any
  // larger count.
  const std::vector<int> adversarial =
      AdversarialPromptSampler(base, target, lambda, largest, common.seed);

  std::string table = "count,method,model,rating,rank,injected_prompts\n";
  for (int count : counts) {
    const std::vector<int> chosen(adversarial.begin(),
                                  adversarial.begin() + count);
    const KothGame koth = InjectClones(base, chosen, noise, common.seed + 1);
    const std::string suffix = "_" + std::to_string(count);
    run.Emit("game" + suffix + ".json",
             GameToJson(koth.game, &koth.clone_source));
    std::vector<RatingReport> reports;
    reports.push_back(EloReport("king", koth.models(), KothElo(koth)));
    std::string prompts = "prompt,clone_source";
    std::vector<Eigen::VectorXd> prompt_mass;
    for (bool cce : {false, true}) {
      for (bool shannon : {false, true}) {
        const RatingMethod tag = MethodFor(cce, shannon);
        const EquilibriumResult r = SolveWith(koth.game, cce, shannon, flags);
        run.Solver(std::string(MethodTag(tag)) + suffix, r);
        RatingReport full = Rate(koth.game, r.AsJoint(), tag);
        prompts += "," + std::string(MethodTag(tag)) + "_mass";
        prompt_mass.push_back(full.players[kPromptPlayer].masses);
        RatingReport models;
        models.method = tag;
        models.tie_tolerance = full.tie_tolerance;
        models.players.push_back(full.players[kKingPlayer]);
        reports.push_back(std::move(models));
      }
    }
    prompts += "\n";
    for (int p = 0; p < koth.num_prompts(); ++p) {
      prompts += koth.prompts()[p] + "," + std::to_string(koth.clone_source[p]);
      for (const Eigen::VectorXd& m : prompt_mass) {
        prompts += "," + FormatDouble(m[p]);
      }
      prompts += "\n";
    }
    run.Emit("prompts" + suffix + ".csv", prompts);
    for (const RatingReport& report : reports) {
      const std::string tag(MethodTag(report.method));
      run.Emit("ranking_" + tag + suffix + ".csv", RatingReportCsv(report));
      const PlayerRatings& p = report.players.front();
      for (int k : p.DisplayOrder()) {
        table += std::to_string(count) + "," + tag + "," + p.labels[k] + "," +
                 FormatDouble(p.ratings[k]) + "," + std::to_string(p.ranks[k]) +
                 "," + std::to_string(count) + "\n";
      }
    }
  }
  run.Emit("clone_test.csv", table);
  return run.Finish();
}

int CmdDecompose(const CommonFlags& common, const std::string& game_path,
                 const std::string& equilibrium_path, int player,
                 const std::string& action, int co_player,
                 const std::string& families_path) {
  Run run("decompose", common.out_dir, common.seed);
  run.config() = {{"game", game_path},
                  {"equilibrium", equilibrium_path},
                  {"player", player},
                  {"action", action},
                  {"co_player", co_player},
                  {"families", families_path}};
  run.Input(game_path);
  const Game game = ReadGame(game_path);
  const EquilibriumResult result =
      EquilibriumFromJson(game, Json::parse(run.Input(equilibrium_path)));
  if (player < 0 || player >= game.num_players()) {
    throw DimensionError("player index out of range");
  }
  std::optional<std::map<std::string, std::string>> families;
  if (!families_path.empty()) {
    const Json json = Json::parse(run.Input(families_path));
    families = json.get<std::map<std::string, std::string>>();
  }
  const DecompositionTable table =
      Decompose(game, result.AsJoint(), player, game.ActionIndex(player, action),
                co_player, families ? &*families : nullptr);
  run.Emit("decomposition.csv", DecompositionCsv(table));
  return run.Finish();
}

SimConfig SimConfigFromJson(const Json& json, std::vector<SimMethod>* methods) {
  SimConfig c;
  c.num_skills = json.value("num_skills", c.num_skills);
  c.initial_prompts = json.value("initial_prompts", c.initial_prompts);
  c.initial_models = json.value("initial_models", c.initial_models);
  c.candidate_prompts = json.value("candidate_prompts", c.candidate_prompts);
  c.candidate_models = json.value("candidate_models", c.candidate_models);
  c.iterations = json.value("iterations", c.iterations);
  c.additional_prompts = json.value("additional_prompts", c.additional_prompts);
  c.trials = json.value("trials", c.trials);
  c.max_model_rounds = json.value("max_model_rounds", c.max_model_rounds);
  c.elo_mean_utility = json.value("elo_mean_utility", c.elo_mean_utility);
  if (json.contains("qre")) {
    const Json& q = json.at("qre");
    c.qre.tau_init = q.value("tau_init", c.qre.tau_init);
    c.qre.tau_decay = q.value("tau_decay", c.qre.tau_decay);
    c.qre.anneal_check_interval =
        q.value("anneal_interval", c.qre.anneal_check_interval);
    c.qre.anneal_gate = q.value("anneal_gate", c.qre.anneal_gate);
    c.qre.tau_terminal = q.value("tau_terminal", c.qre.tau_terminal);
    c.qre.learning_rate = q.value("lr", c.qre.learning_rate);
    c.qre.max_steps = q.value("max_steps", c.qre.max_steps);
  }
  const std::vector<std::string> tags =
      json.value("methods", std::vector<std::string>{"ELO", "NE"});
  for (const std::string& t : tags) methods->push_back(ParseSimMethod(t));
  c.Validate();
  return c;
}

int CmdSimulate(const CommonFlags& common, const std::string& config_path,
                bool seed_given) {
  Run run("simulate", common.out_dir, common.seed);
  const Json json = config_path.empty()
                        ? Json::object()
                        : Json::parse(run.Input(config_path));
  std::vector<SimMethod> methods;
  SimConfig config = SimConfigFromJson(json, &methods);
  config.seed = seed_given ? common.seed : json.value("seed", std::uint64_t{0});
  run.config() = json;
  run.config()["seed"] = config.seed;
  std::vector<Trajectory> all;
  for (SimMethod method : methods) {
    config.method = method;
    std::vector<Trajectory> runs = RunSimulation(config);
    for (const Trajectory& t : runs) {
      run.Emit("snapshots/" + std::string(SimMethodTag(method)) + "_trial" +
                   std::to_string(t.trial) + ".json",
               TrajectoryToJson(t));
      if (t.aborted) {
        std::cerr << "trial " << t.trial << " aborted: " << t.diagnostics
                  << "\n";
        run.NotConverged();
      }
    }
    all.insert(all.end(), runs.begin(), runs.end());
  }
  run.Emit("entropy_trace.csv", EntropyTraceCsv(EntropyTrace(all)));
  return run.Finish();
}

int CmdEnumerate(const CommonFlags& common, const std::string& game_path,
                 int count, double epsilon, double eta, int iterations,
                 const SolveFlags& flags) {
  Run run("enumerate", common.out_dir, common.seed);
  run.config() = EchoSolve(flags);
  run.config()["game"] = game_path;
  run.config()["count"] = count;
  run.config()["epsilon"] = epsilon;
  run.config()["eta"] = eta;
  run.config()["iterations"] = iterations;
  run.Input(game_path);
  const Game game = ReadGame(game_path);
  EnumerationConfig config;
  config.count = count;
  config.epsilon = epsilon;
  config.seed = common.seed;
  config.lle = QreFrom(flags);
  config.lle.targets = AffinityTargets(game, KernelFrom(flags));
  const EnumerationResult found = EnumerateNes(game, config);
  Json bundle;
  bundle["complete"] = found.complete;
  bundle["min_rating_distance"] = found.min_rating_distance;
  Json list = Json::array();
  for (size_t k = 0; k < found.equilibria.size(); ++k) {
    EquilibriumResult r;
    r.profile = found.equilibria[k];
    r.exploitability = found.exploitabilities[k];
    r.converged = true;
    Json e = EquilibriumToJson(game, r);
    e["ratings"] = Json::array();
    for (int i = 0; i < game.num_players(); ++i) {
      const Eigen::VectorXd reg = Regrets(game, found.equilibria[k], i);
      e["ratings"].push_back(std::vector<double>(reg.data(), reg.data() + reg.size()));
    }
    list.push_back(std::move(e));
  }
  bundle["equilibria"] = std::move(list);
  run.Emit("equilibria.json", bundle);
  const RiskDominanceResult risk =
      RiskDominanceBeliefs(game, found.equilibria, eta, iterations);
  std::string table = "equilibrium,player,prior,payoff,initial_payoff\n";
  for (Eigen::Index k = 0; k < risk.payoffs.rows(); ++k) {
    for (int i = 0; i < game.num_players(); ++i) {
      table += std::to_string(k) + "," + game.player_name(i) + "," +
               FormatDouble(risk.priors[i][k]) + "," +
               FormatDouble(risk.payoffs(k, i)) + "," +
               FormatDouble(risk.initial_payoffs(k, i)) + "\n";
    }
  }
  run.Emit("risk_dominance.csv", table);
  if (!found.complete) {
    std::cerr << "found " << found.equilibria.size() << " of " << count
              << " equilibria\n";
    run.NotConverged();
  }
  return run.Finish();
}

int CmdToy(const CommonFlags& common, const std::string& name) {
  Run run("toy", common.out_dir, common.seed);
  run.config()["name"] = name;
  const std::map<std::string, Game (*)()> games = {
      {"rps", &RockPaperScissors},
      {"rps-duplicate-rock", &RockPaperScissorsDuplicateRock},
      {"chicken", &Chicken},
      {"chicken-duplicate-straight", &ChickenDuplicateStraight}};
  run.Emit(name + ".json", GameToJson(games.at(name)()));
  return run.Finish();
}

int CmdSynthesize(const CommonFlags& common, SyntheticKothConfig config) {
  Run run("synthesize", common.out_dir, common.seed);
  config.seed = common.seed;
  run.config() = {{"models", config.models},
                  {"prompts", config.prompts},
                  {"adversarial_prompts", config.adversarial_prompts},
                  {"spread", config.spread},
                  {"noise", config.noise}};
  const KothGame koth = SyntheticKoth(config);
  run.Emit("synthetic_koth.json", GameToJson(koth.game, &koth.clone_source));
  return run.Finish();
}

}  // namespace
}  // namespace eqrate

int main(int argc, char** argv) {
  using namespace eqrate;
  CLI::App app{"Equilibrium ratings for evaluation games"};
  app.require_subcommand(1);
  CommonFlags common;
  const char* env_out = std::getenv("EQRATE_OUT_DIR");
  common.out_dir = env_out != nullptr && *env_out != '\0' ? env_out : "out";
  CLI::Option* seed_opt =
      app.add_option("--seed", common.seed, "Seed for randomised commands")
          ->capture_default_str();
  app.add_option("--out", common.out_dir, "Output directory")
      ->capture_default_str();
  app.fallthrough();

  std::string prefs, game, equilibrium, method = "ne", entropy = "affinity";
  std::string families, target, counts = "0,250,500", action, config;
  std::string toy_name;
  int player = 0, co_player = 1, count = 4, iterations = 10000;
  double lambda = 10.0, noise = 0.0, tie = kDefaultTieTolerance, eta = 1e-2;
  double epsilon_enum = 1e-3;
  SolveFlags solve;
  SyntheticKothConfig synth;

  auto* build = app.add_subcommand("build", "Build a game from preferences");
  auto* src = build->add_option_group("source");
  src->add_option("--prefs", prefs, "Preference CSV")->check(CLI::ExistingFile);
  src->add_option("--game", game, "Game JSON")->check(CLI::ExistingFile);
  src->require_option(1);

  auto* solve_cmd = app.add_subcommand("solve", "Solve for an equilibrium");
  solve_cmd->add_option("--game", game, "Game JSON")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--method", solve.method, "ne | cce")
      ->check(CLI::IsMember({"ne", "cce"}));
  solve_cmd->add_option("--entropy", solve.entropy, "affinity | shannon")
      ->check(CLI::IsMember({"affinity", "shannon"}));
  AddSolveFlags(solve_cmd, &solve);

  auto* rate = app.add_subcommand("rate", "Rate actions");
  rate->add_option("--game", game, "Game JSON")
      ->required()
      ->check(CLI::ExistingFile);
  rate->add_option("--equilibrium", equilibrium, "Equilibrium JSON")
      ->check(CLI::ExistingFile);
  rate->add_option("--method", method, "elo, or omit to use --equilibrium")
      ->check(CLI::IsMember({"elo", "ne"}));
  rate->add_option("--tie-tolerance", tie, "Ranking tie tolerance");

  auto* clone = app.add_subcommand("clone-test", "Adversarial clone sweep");
  clone->add_option("--game", game, "King-of-the-hill game JSON")
      ->required()
      ->check(CLI::ExistingFile);
  clone->add_option("--target", target, "Targeted model")->required();
  clone->add_option("--lambda", lambda, "Adversarial sampler sharpness")
      ->capture_default_str();
  clone->add_option("--counts", counts, "Comma-separated clone counts")
      ->capture_default_str();
  clone->add_option("--noise", noise, "Uniform noise half-width on clones")
      ->capture_default_str();
  AddSolveFlags(clone, &solve);

  auto* decompose = app.add_subcommand("decompose", "Decompose a rating");
  decompose->add_option("--game", game, "Game JSON")
      ->required()
      ->check(CLI::ExistingFile);
  decompose->add_option("--equilibrium", equilibrium, "Equilibrium JSON")
      ->required()
      ->check(CLI::ExistingFile);
  decompose->add_option("--player", player, "Rated player index")->required();
  decompose->add_option("--action", action, "Rated action label")->required();
  decompose->add_option("--co-player", co_player, "Co-player index")
      ->required();
  decompose->add_option("--families", families,
                        "JSON object mapping action label to family")
      ->check(CLI::ExistingFile);

  auto* simulate = app.add_subcommand("simulate", "Skill-world simulation");
  simulate->add_option("--config", config, "Simulation config JSON")
      ->check(CLI::ExistingFile);

  auto* enumerate = app.add_subcommand("enumerate",
                                       "Find several NEs and rank them by "
                                       "risk dominance");
  enumerate->add_option("--game", game, "Game JSON")
      ->required()
      ->check(CLI::ExistingFile);
  enumerate->add_option("--count", count, "Equilibria to find")
      ->capture_default_str();
  enumerate->add_option("--epsilon", epsilon_enum, "Exploitability bound")
      ->capture_default_str();
  enumerate->add_option("--eta", eta, "Belief step size")->capture_default_str();
  enumerate->add_option("--iterations", iterations, "Belief iterations")
      ->capture_default_str();
  AddSolveFlags(enumerate, &solve, /*with_epsilon=*/false);

  auto* toy = app.add_subcommand("toy", "Write a reference game");
  toy->add_option("name", toy_name, "Game name")
      ->required()
      ->check(CLI::IsMember({"rps", "rps-duplicate-rock", "chicken",
                             "chicken-duplicate-straight"}));

  auto* synthesize =
      app.add_subcommand("synthesize", "Write a synthetic preference game");
  synthesize->add_option("--models", synth.models)->capture_default_str();
  synthesize->add_option("--prompts", synth.prompts)->capture_default_str();
  synthesize->add_option("--adversarial", synth.adversarial_prompts)
      ->capture_default_str();
  synthesize->add_option("--spread", synth.spread)->capture_default_str();
  synthesize->add_option("--noise", synth.noise)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (build->parsed()) return CmdBuild(common, prefs, game);
    if (solve_cmd->parsed()) return CmdSolve(common, game, solve);
    if (rate->parsed()) {
      return CmdRate(common, game, equilibrium,
                     rate->count("--method") > 0 ? method : "", tie);
    }
    if (clone->parsed()) {
      return CmdCloneTest(common, game, target, lambda, counts, noise, solve);
    }
    if (decompose->parsed()) {
      return CmdDecompose(common, game, equilibrium, player, action, co_player,
                          families);
    }
    if (simulate->parsed()) {
      return CmdSimulate(common, config, seed_opt->count() > 0);
    }
    if (enumerate->parsed()) {
      return CmdEnumerate(common, game, count, epsilon_enum, eta, iterations,
                          solve);
    }
    if (toy->parsed()) return CmdToy(common, toy_name);
    if (synthesize->parsed()) return CmdSynthesize(common, synth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
