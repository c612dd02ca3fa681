// Copyright 2026 The permrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: builds the grid-world games, synthesizes the
// maximally permissive strategy, restricts the game to the permissive
// envelope, learns worst-case optimal behaviour inside it, and evaluates or
// verifies strategies. `permrl pipeline` chains all stages.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permrl/errors.hpp"
#include "permrl/game.hpp"
#include "permrl/gridworld.hpp"
#include "permrl/io.hpp"
#include "permrl/learn.hpp"
#include "permrl/log.hpp"
#include "permrl/restrict.hpp"
#include "permrl/safety.hpp"
#include "permrl/strategy.hpp"
#include "permrl/verify.hpp"

namespace {

using nlohmann::ordered_json;
using namespace permrl;

constexpr int kExitUnrealizable = 2;
constexpr int kExitBadInput = 3;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Scenario handling shared by `build` and `pipeline`.

struct ScenarioFlags {
  std::string scenario = "example1";
  int n = 3;
  int counter_max = 4;
  std::optional<int> system_start;
  std::optional<int> env_start;
  std::optional<int> target_a;
  std::optional<int> target_b;
  std::string game_path;  // scenario "custom"
  std::string spec_path;

  GridConfig grid_config() const {
    GridConfig cfg;
    cfg.n = n;
    cfg.system_start = system_start;
    cfg.env_start = env_start;
    if (target_a || target_b) {
      if (!target_a || !target_b) throw ParseError("both liveness targets must be given");
      cfg.liveness_targets = std::make_pair(*target_a, *target_b);
    }
    cfg.counter_max = counter_max;
    return cfg;
  }
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags* f) {
  cmd->add_option("--scenario", f->scenario,
                  "Scenario: example1 | example2 | example3 | custom")
      ->default_val(f->scenario);
  cmd->add_option("--n", f->n, "Grid side length")->default_val(f->n);
  cmd->add_option("--counter-max", f->counter_max,
                  "Move budget between target visits (example3)")
      ->default_val(f->counter_max);
  cmd->add_option("--system-start", f->system_start, "System robot start cell");
  cmd->add_option("--env-start", f->env_start, "Environment robot start cell");
  cmd->add_option("--target-a", f->target_a, "First liveness target cell");
  cmd->add_option("--target-b", f->target_b, "Second liveness target cell");
  cmd->add_option("--game", f->game_path, "Game JSON (scenario custom)");
  cmd->add_option("--spec", f->spec_path, "Safety spec text file (scenario custom)");
}

struct BuiltScenario {
  Game game;
  SafetySpec spec;
  std::string ltl;  // example2 only
};

BuiltScenario build_scenario(const ScenarioFlags& f) {
  BuiltScenario out;
  if (f.scenario == "example1") {
    GridGame g = build_example1(f.grid_config());
    out.game = std::move(g.game);
    out.spec = std::move(g.spec);
  } else if (f.scenario == "example3") {
    GridGame3 g = build_example3(f.grid_config());
    out.game = std::move(g.game);
    out.spec = std::move(g.spec);
  } else if (f.scenario == "example2") {
    GridGame2 g = build_example2(f.grid_config());
    out.game = std::move(g.game);
    out.ltl = std::move(g.ltl);
  } else if (f.scenario == "custom") {
    if (f.game_path.empty()) throw ParseError("scenario custom requires --game");
    out.game = Game::from_data(load_game_file(f.game_path));
    if (!f.spec_path.empty()) out.spec = load_spec_file(f.spec_path, out.game.ap());
  } else {
    throw ParseError("unknown scenario '" + f.scenario + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Learn configuration shared by `learn` and `pipeline`.

struct LearnFlags {
  double gamma = 0.9;
  std::uint64_t seed = 0;
  std::int64_t max_iterations = 0;
  int episode_length = 100;
  std::int64_t window = 10000;
  double threshold = 5e-5;
  double epsilon_start = 1.0;
  double epsilon_end = 0.3;
  double epsilon_anneal_frac = 0.5;
  double alpha_scale = 100.0;
  double alpha_exponent = 0.6;

  LearnConfig to_config() const {
    LearnConfig cfg;
    cfg.gamma = gamma;
    cfg.seed = seed;
    cfg.max_iterations = max_iterations;
    cfg.episode_length = episode_length;
    cfg.window = window;
    cfg.threshold = threshold;
    cfg.epsilon_start = epsilon_start;
    cfg.epsilon_end = epsilon_end;
    cfg.epsilon_anneal_frac = epsilon_anneal_frac;
    cfg.alpha_scale = alpha_scale;
    cfg.alpha_exponent = alpha_exponent;
    return cfg;
  }
};

void add_learn_flags(CLI::App* cmd, LearnFlags* f) {
  cmd->add_option("--gamma", f->gamma, "Discount factor")->default_val(f->gamma);
  cmd->add_option("--seed", f->seed, "Root RNG seed")->default_val(f->seed);
  cmd->add_option("--max-iterations", f->max_iterations,
                  "Learning iteration budget (0 = derive from game size)")
      ->default_val(f->max_iterations);
  cmd->add_option("--episode-length", f->episode_length, "Steps per episode")
      ->default_val(f->episode_length);
  cmd->add_option("--window", f->window, "Iterations per convergence window")
      ->default_val(f->window);
  cmd->add_option("--threshold", f->threshold,
                  "Stop once the table's Bellman residual falls below this (0 = never)")
      ->default_val(f->threshold);
  cmd->add_option("--epsilon-start", f->epsilon_start, "Initial exploration rate")
      ->default_val(f->epsilon_start);
  cmd->add_option("--epsilon-end", f->epsilon_end, "Final exploration rate")
      ->default_val(f->epsilon_end);
  cmd->add_option("--epsilon-anneal-frac", f->epsilon_anneal_frac,
                  "Fraction of the budget over which epsilon anneals")
      ->default_val(f->epsilon_anneal_frac);
  cmd->add_option("--alpha-scale", f->alpha_scale, "Step-size scale")
      ->default_val(f->alpha_scale);
  cmd->add_option("--alpha-exponent", f->alpha_exponent, "Step-size decay exponent")
      ->default_val(f->alpha_exponent);
}

RewardFn make_reward(const std::string& name, const Game& g) {
  if (name == "diagonal") return diagonal_reward(g);
  if (name == "zero") {
    return [](StateId, ActionId) { return 0.0; };
  }
  throw ParseError("unknown reward '" + name + "' (expected diagonal or zero)");
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

struct BuildArgs {
  ScenarioFlags scenario;
  std::string out = "game.json";
  std::string spec_out;
  std::string ltl_out;
};

int cmd_build(const BuildArgs& args) {
  BuiltScenario built = build_scenario(args.scenario);
  save_game_file(args.out, built.game.to_data());
  if (!args.spec_out.empty()) {
    if (built.spec.initial.empty()) throw ParseError("scenario provides no safety spec");
    save_spec_file(args.spec_out, built.spec, built.game.ap());
  }
  if (!args.ltl_out.empty()) {
    if (built.ltl.empty()) throw ParseError("scenario provides no LTL objective");
    write_text_file(args.ltl_out, built.ltl + "\n");
  }
  std::cout << "built " << args.scenario.scenario << ": " << built.game.num_states()
            << " states (" << built.game.num_system_states() << " system), "
            << built.game.num_transitions() << " transitions\n";
  return 0;
}

struct SynthArgs {
  std::string game;
  std::string spec;
  std::string out = "strategy.json";
};

int cmd_synth(const SynthArgs& args) {
  const Game g = Game::from_data(load_game_file(args.game));
  const SafetySpec spec = load_spec_file(args.spec, g.ap());
  WinningRegion region;
  const MemorylessStrategy mu = maximally_permissive(g, spec, &region);
  save_strategy_file(args.out, mu);
  int winning = 0;
  int winning_system = 0;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (!region.contains(s)) continue;
    winning++;
    if (g.player(s) == Player::kSystem) winning_system++;
  }
  std::cout << "winning region: " << winning << " states (" << winning_system
            << " system) of " << g.num_states() << "; edge operations "
            << region.edge_operations << " <= 4*" << g.num_transitions() << "\n";
  return 0;
}

struct RestrictArgs {
  std::string game;
  std::string strategy;
  std::string out = "ghat.json";
  std::string map_out = "statemap.json";
};

int cmd_restrict(const RestrictArgs& args) {
  const Game g = Game::from_data(load_game_file(args.game));
  const MemorylessStrategy mu = load_strategy_file(args.strategy, g.num_states());
  auto [ghat, map] = apply_strategy(g, mu);
  save_game_file(args.out, ghat.to_data());
  save_statemap_file(args.map_out, map);
  std::cout << "restricted game: " << ghat.num_states() << " states ("
            << ghat.num_system_states() << " system), " << ghat.num_transitions()
            << " transitions\n";
  return 0;
}

struct LearnArgs {
  std::string game;
  std::string reward = "diagonal";
  LearnFlags flags;
  std::string q_out = "q.csv";
  std::string v_out = "v.csv";
  std::string log_out = "convergence.csv";
  std::string strategy_out;
};

int cmd_learn(const LearnArgs& args) {
  const Game g = Game::from_data(load_game_file(args.game));
  const RewardFn reward = make_reward(args.reward, g);
  const LearnResult result = maximin_q_learn(g, reward, args.flags.to_config());
  write_text_file(args.q_out, qtable_to_csv(g, result.q));
  write_text_file(args.v_out, values_to_csv(result.v));
  write_text_file(args.log_out, convergence_to_csv(result.log));
  if (!args.strategy_out.empty()) {
    save_strategy_file(args.strategy_out, greedy_strategy(g, result.q));
  }
  double max_v = 0.0;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.player(s) == Player::kSystem) max_v = std::max(max_v, result.v.v[s]);
  }
  std::cout << "learned " << result.log.iterations << " iterations ("
            << (result.log.converged ? "converged" : "budget exhausted")
            << "), max V = " << format_double(max_v) << "\n";
  return 0;
}

struct EvalArgs {
  std::string game;
  std::string strategy;
  std::string reward = "diagonal";
  double gamma = 0.9;
  int horizon = 30;
  std::string out = "bounds.csv";
};

int cmd_eval(const EvalArgs& args) {
  const Game g = Game::from_data(load_game_file(args.game));
  const MemorylessStrategy mu = load_strategy_file(args.strategy, g.num_states());
  const RewardTable table = RewardTable::from_fn(g, make_reward(args.reward, g));
  std::string csv = "state,lower,upper\n";
  double best_lower = 0.0;
  bool any = false;
  for (StateId s = 0; s < g.num_states(); ++s) {
    const RewardBounds b = worst_case_reward(g, mu, table, s, args.gamma, args.horizon);
    csv += std::to_string(s) + "," + format_double(b.lower) + "," + format_double(b.upper) +
           "\n";
    if (g.player(s) == Player::kSystem) {
      best_lower = any ? std::max(best_lower, b.lower) : b.lower;
      any = true;
    }
  }
  write_text_file(args.out, csv);
  std::cout << "evaluated " << g.num_states() << " states; best system worst-case >= "
            << format_double(best_lower) << "\n";
  return 0;
}

struct VerifyArgs {
  std::string game;
  std::string spec;
  std::string strategy;
  bool maximal = false;
  std::int64_t limit = 1000000;
  std::string witness_out;
};

int cmd_verify(const VerifyArgs& args) {
  const Game g = Game::from_data(load_game_file(args.game));
  const SafetySpec spec = load_spec_file(args.spec, g.ap());
  const MemorylessStrategy mu = load_strategy_file(args.strategy, g.num_states());

  const bool winning = is_winning_strategy(g, spec, mu);
  if (winning) {
    std::cout << "winning: yes\n";
  } else {
    const std::string reason = check_envelope_sound(g, spec, mu, g.num_states() + 1);
    std::cout << "winning: no (" << (reason.empty() ? "violation at an initial state" : reason)
              << ")\n";
  }

  if (args.maximal) {
    try {
      const auto winners = enumerate_winning_strategies(g, spec, args.limit);
      const MemorylessStrategy* excluded = nullptr;
      for (const auto& w : winners) {
        if (!strategy_includes(g, mu, w)) {
          excluded = &w;
          break;
        }
      }
      if (excluded == nullptr) {
        std::cout << "maximal: yes (checked against " << winners.size()
                  << " enumerated winning strategies)\n";
      } else {
        std::cout << "maximal: no (found an excluded winning strategy)\n";
        if (!args.witness_out.empty()) {
          save_strategy_file(args.witness_out, *excluded);
          std::cout << "witness written to " << args.witness_out << "\n";
        }
      }
    } catch (const ModelError& e) {
      log::warn(std::string("maximality check skipped: ") + e.what());
      std::cout << "maximal: skipped (limit exceeded)\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Pipeline.

struct PipelineArgs {
  std::string config_path;
  ScenarioFlags scenario;
  LearnFlags learn;
  std::string reward = "diagonal";
  int horizon = 30;
  std::string outdir = "out";
  std::vector<std::uint64_t> seeds;
  int jobs = 1;
};

// Flags win over config-file values: parse the config first and reparse the
// command line on top of it.
void apply_config_file(PipelineArgs* args) {
  const std::string text = read_text_file(args->config_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("config '" + args->config_path + "': " + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be an object");
  const auto get = [&](const char* key, auto* out) {
    if (j.contains(key)) *out = j.at(key).get<std::decay_t<decltype(*out)>>();
  };
  get("scenario", &args->scenario.scenario);
  get("n", &args->scenario.n);
  get("counter_max", &args->scenario.counter_max);
  if (j.contains("system_start")) args->scenario.system_start = j.at("system_start").get<int>();
  if (j.contains("env_start")) args->scenario.env_start = j.at("env_start").get<int>();
  if (j.contains("target_a")) args->scenario.target_a = j.at("target_a").get<int>();
  if (j.contains("target_b")) args->scenario.target_b = j.at("target_b").get<int>();
  get("game", &args->scenario.game_path);
  get("spec", &args->scenario.spec_path);
  get("gamma", &args->learn.gamma);
  get("seed", &args->learn.seed);
  get("max_iterations", &args->learn.max_iterations);
  get("episode_length", &args->learn.episode_length);
  get("window", &args->learn.window);
  get("threshold", &args->learn.threshold);
  get("epsilon_start", &args->learn.epsilon_start);
  get("epsilon_end", &args->learn.epsilon_end);
  get("epsilon_anneal_frac", &args->learn.epsilon_anneal_frac);
  get("alpha_scale", &args->learn.alpha_scale);
  get("alpha_exponent", &args->learn.alpha_exponent);
  get("reward", &args->reward);
  get("horizon", &args->horizon);
  get("outdir", &args->outdir);
  get("seeds", &args->seeds);
  get("jobs", &args->jobs);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    static const std::vector<std::string> known = {
        "scenario", "n", "counter_max", "system_start", "env_start", "target_a", "target_b",
        "game", "spec", "gamma", "seed", "max_iterations", "episode_length", "window",
        "threshold", "epsilon_start", "epsilon_end", "epsilon_anneal_frac", "alpha_scale",
        "alpha_exponent", "reward", "horizon", "outdir", "seeds", "jobs"};
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw ParseError("config: unknown key '" + key + "'");
  }
}

// One full Algorithm-1 run for a single seed; returns the summary.
ordered_json run_pipeline_once(const BuiltScenario& built, const PipelineArgs& args,
                               std::uint64_t seed, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto path = [&dir](const char* name) { return dir + "/" + name; };
  const auto t_start = std::chrono::steady_clock::now();

  const Game& g = built.game;
  save_game_file(path("game.json"), g.to_data());
  save_spec_file(path("spec.txt"), built.spec, g.ap());

  // Step 1: maximally permissive strategy for the safety objective.
  WinningRegion region;
  const MemorylessStrategy mu_p = maximally_permissive(g, built.spec, &region);
  const double t_synth = seconds_since(t_start);
  save_strategy_file(path("permissive.json"), mu_p);

  int winning_states = 0;
  int winning_system = 0;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (!region.contains(s)) continue;
    winning_states++;
    if (g.player(s) == Player::kSystem) winning_system++;
  }

  // Step 2: restrict to the permissive envelope.
  auto [ghat, map] = apply_strategy(g, mu_p);
  save_game_file(path("ghat.json"), ghat.to_data());
  save_statemap_file(path("statemap.json"), map);

  // Step 3: learn inside the envelope.
  const RewardFn reward = make_reward(args.reward, ghat);
  LearnConfig cfg = args.learn.to_config();
  cfg.seed = seed;
  const auto t_learn_start = std::chrono::steady_clock::now();
  const LearnResult result = maximin_q_learn(ghat, reward, cfg);
  const double t_learn = seconds_since(t_learn_start);
  write_text_file(path("q.csv"), qtable_to_csv(ghat, result.q));
  write_text_file(path("v.csv"), values_to_csv(result.v));
  write_text_file(path("convergence.csv"), convergence_to_csv(result.log));

  // Step 4: greedy strategy, mapped back to the original game.
  const MemorylessStrategy greedy_hat = greedy_strategy(ghat, result.q);
  save_strategy_file(path("greedy_ghat.json"), greedy_hat);
  save_strategy_file(path("greedy.json"),
                     lift_strategy(map, greedy_hat, g.num_states()));

  double max_v = 0.0;
  StateId max_v_state = -1;
  for (StateId s = 0; s < ghat.num_states(); ++s) {
    if (ghat.player(s) != Player::kSystem) continue;
    if (max_v_state < 0 || result.v.v[s] > max_v) {
      max_v = result.v.v[s];
      max_v_state = s;
    }
  }

  // Worst-case rollout of the greedy strategy from the best state; brackets
  // the same value the learner reports, now from the adversary's side.
  const RewardTable table = RewardTable::from_fn(ghat, reward);
  const RewardBounds best_bounds =
      max_v_state >= 0 ? worst_case_reward(ghat, greedy_hat, table, max_v_state,
                                           cfg.gamma, args.horizon)
                       : RewardBounds{};

  ordered_json summary;
  summary["scenario"] = args.scenario.scenario;
  summary["n"] = args.scenario.n;
  if (args.scenario.scenario == "example3") {
    summary["counter_max"] = args.scenario.counter_max;
  }
  summary["gamma"] = cfg.gamma;
  summary["seed"] = seed;
  summary["rng_streams"] = {{"learner", 1}, {"episodes", 2}};
  summary["sizes"] = {
      {"original", {{"states", g.num_states()},
                    {"system_states", g.num_system_states()},
                    {"transitions", g.num_transitions()}}},
      {"winning_region", {{"states", winning_states}, {"system_states", winning_system}}},
      {"restricted", {{"states", ghat.num_states()},
                      {"system_states", ghat.num_system_states()},
                      {"transitions", ghat.num_transitions()}}},
  };
  summary["synthesis"] = {{"edge_operations", region.edge_operations},
                          {"edge_operation_bound", 4 * static_cast<std::int64_t>(
                                                           g.num_transitions())}};
  summary["learning"] = {{"iterations", result.log.iterations},
                         {"converged", result.log.converged},
                         {"windows", result.log.entries.size()},
                         {"max_v", max_v},
                         {"max_v_state", max_v_state}};
  summary["evaluation"] = {{"greedy_worst_case_lower", best_bounds.lower},
                           {"greedy_worst_case_upper", best_bounds.upper},
                           {"horizon", args.horizon}};
  summary["timing"] = {{"synth_seconds", t_synth},
                       {"learn_seconds", t_learn},
                       {"total_seconds", seconds_since(t_start)}};
  write_text_file(path("summary.json"), summary.dump(2) + "\n");
  return summary;
}

int cmd_pipeline(PipelineArgs& args) {
  if (args.jobs < 1) throw ParseError("--jobs must be at least 1");
  std::vector<std::uint64_t> seeds = args.seeds;
  if (seeds.empty()) seeds.push_back(args.learn.seed);

  const BuiltScenario built = build_scenario(args.scenario);
  if (built.spec.initial.empty()) {
    throw ParseError("scenario '" + args.scenario.scenario +
                     "' has no safety spec; the pipeline needs one (example2 is emitted for "
                     "documentation only; use build)");
  }

  if (seeds.size() == 1) {
    const ordered_json summary = run_pipeline_once(built, args, seeds[0], args.outdir);
    std::cout << summary["sizes"]["restricted"]["states"] << " restricted states ("
              << summary["sizes"]["restricted"]["system_states"] << " system), max V = "
              << format_double(summary["learning"]["max_v"].get<double>()) << ", "
              << summary["learning"]["iterations"] << " iterations\n";
    return 0;
  }

  // Independent seeds run in parallel; each writes its own subdirectory.
  std::vector<ordered_json> summaries(seeds.size());
  std::vector<std::string> errors;
  std::mutex err_mutex;
  std::atomic<size_t> next{0};
  const int workers = std::min<int>(args.jobs, static_cast<int>(seeds.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1)) {
        try {
          const std::string dir = args.outdir + "/seed_" + std::to_string(seeds[i]);
          summaries[i] = run_pipeline_once(built, args, seeds[i], dir);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(err_mutex);
          errors.push_back("seed " + std::to_string(seeds[i]) + ": " + e.what());
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (!errors.empty()) throw ModelError("pipeline failed: " + errors.front());

  ordered_json top;
  top["scenario"] = args.scenario.scenario;
  top["seeds"] = seeds;
  top["runs"] = ordered_json::array();
  for (size_t i = 0; i < seeds.size(); ++i) {
    top["runs"].push_back({{"seed", seeds[i]},
                           {"max_v", summaries[i]["learning"]["max_v"]},
                           {"iterations", summaries[i]["learning"]["iterations"]}});
  }
  std::filesystem::create_directories(args.outdir);
  write_text_file(args.outdir + "/summary.json", top.dump(2) + "\n");
  std::cout << seeds.size() << " seeds completed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permissive-strategy synthesis and maximin-Q learning for safety games"};
  app.require_subcommand(1);

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand("build", "Construct a scenario game");
  add_scenario_flags(build, &build_args.scenario);
  build->add_option("--out", build_args.out, "Game JSON output")->default_val(build_args.out);
  build->add_option("--spec-out", build_args.spec_out, "Safety spec text output");
  build->add_option("--ltl-out", build_args.ltl_out, "Full LTL objective output (example2)");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Synthesize the maximally permissive strategy");
  synth->add_option("--game", synth_args.game, "Game JSON")->required();
  synth->add_option("--spec", synth_args.spec, "Safety spec text file")->required();
  synth->add_option("--out", synth_args.out, "Strategy JSON output")->default_val(synth_args.out);

  RestrictArgs restrict_args;
  CLI::App* restr = app.add_subcommand("restrict", "Restrict a game to a strategy's envelope");
  restr->add_option("--game", restrict_args.game, "Game JSON")->required();
  restr->add_option("--strategy", restrict_args.strategy, "Strategy JSON")->required();
  restr->add_option("--out", restrict_args.out, "Restricted game output")
      ->default_val(restrict_args.out);
  restr->add_option("--map-out", restrict_args.map_out, "State map output")
      ->default_val(restrict_args.map_out);

  LearnArgs learn_args;
  CLI::App* learn = app.add_subcommand("learn", "Run maximin-Q learning on a game");
  learn->add_option("--game", learn_args.game, "Game JSON (typically the restricted game)")
      ->required();
  learn->add_option("--reward", learn_args.reward, "Reward oracle: diagonal | zero")
      ->default_val(learn_args.reward);
  add_learn_flags(learn, &learn_args.flags);
  learn->add_option("--q-out", learn_args.q_out, "Q CSV output")->default_val(learn_args.q_out);
  learn->add_option("--v-out", learn_args.v_out, "V CSV output")->default_val(learn_args.v_out);
  learn->add_option("--log-out", learn_args.log_out, "Convergence CSV output")
      ->default_val(learn_args.log_out);
  learn->add_option("--strategy-out", learn_args.strategy_out, "Greedy strategy JSON output");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Worst-case evaluation of a strategy");
  eval->add_option("--game", eval_args.game, "Game JSON")->required();
  eval->add_option("--strategy", eval_args.strategy, "Deterministic strategy JSON")->required();
  eval->add_option("--reward", eval_args.reward, "Reward oracle: diagonal | zero")
      ->default_val(eval_args.reward);
  eval->add_option("--gamma", eval_args.gamma, "Discount factor")->default_val(eval_args.gamma);
  eval->add_option("--horizon", eval_args.horizon, "System moves before the tail bound")
      ->default_val(eval_args.horizon);
  eval->add_option("--out", eval_args.out, "Bounds CSV output")->default_val(eval_args.out);

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Check a strategy with brute-force oracles");
  verify->add_option("--game", verify_args.game, "Game JSON")->required();
  verify->add_option("--spec", verify_args.spec, "Safety spec text file")->required();
  verify->add_option("--strategy", verify_args.strategy, "Strategy JSON")->required();
  verify->add_flag("--maximal", verify_args.maximal, "Also check maximality by enumeration");
  verify->add_option("--limit", verify_args.limit, "Enumeration limit")
      ->default_val(verify_args.limit);
  verify->add_option("--witness-out", verify_args.witness_out,
                     "Where to write an excluded winning strategy, if found");

  PipelineArgs pipeline_args;
  CLI::App* pipeline = app.add_subcommand("pipeline", "Build, synthesize, restrict, learn");
  pipeline->add_option("--config", pipeline_args.config_path, "Config JSON (flags override)");
  add_scenario_flags(pipeline, &pipeline_args.scenario);
  add_learn_flags(pipeline, &pipeline_args.learn);
  pipeline->add_option("--reward", pipeline_args.reward, "Reward oracle: diagonal | zero")
      ->default_val(pipeline_args.reward);
  pipeline->add_option("--horizon", pipeline_args.horizon, "Evaluation horizon")
      ->default_val(pipeline_args.horizon);
  pipeline->add_option("--outdir", pipeline_args.outdir, "Artifact directory")
      ->default_val(pipeline_args.outdir);
  pipeline->add_option("--seeds", pipeline_args.seeds, "Run several seeds (comma separated)")
      ->delimiter(',');
  pipeline->add_option("--jobs", pipeline_args.jobs, "Parallel workers for --seeds")
      ->default_val(pipeline_args.jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*build) return cmd_build(build_args);
    if (*synth) return cmd_synth(synth_args);
    if (*restr) return cmd_restrict(restrict_args);
    if (*learn) return cmd_learn(learn_args);
    if (*eval) return cmd_eval(eval_args);
    if (*verify) return cmd_verify(verify_args);
    if (*pipeline) {
      // Config first, then flags on top: reparse so explicit flags win.
      if (!pipeline_args.config_path.empty()) {
        PipelineArgs merged;
        merged.config_path = pipeline_args.config_path;
        apply_config_file(&merged);
        pipeline_args = merged;
        app.clear();
        app.parse(argc, argv);
      }
      return cmd_pipeline(pipeline_args);
    }
  } catch (const UnrealizableError& e) {
    std::cerr << "error: unrealizable objective: " << e.what() << "\n";
    return kExitUnrealizable;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
