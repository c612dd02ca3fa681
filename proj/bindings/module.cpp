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
// Python bindings for the core pipeline: build a scenario game, synthesize
// the maximally permissive strategy, restrict, learn, evaluate, verify.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "permrl/errors.hpp"
#include "permrl/game.hpp"
#include "permrl/gridworld.hpp"
#include "permrl/io.hpp"
#include "permrl/learn.hpp"
#include "permrl/restrict.hpp"
#include "permrl/safety.hpp"
#include "permrl/strategy.hpp"
#include "permrl/verify.hpp"

namespace py = pybind11;
using namespace permrl;

namespace {

// Accepts "diagonal", "zero", or a Python callable (state, action) -> float.
// The returned oracle may reference `g`; callers keep the game alive for the
// duration of the consuming call.
RewardFn resolve_reward(const Game& g, const py::object& reward) {
  if (py::isinstance<py::str>(reward)) {
    const std::string name = reward.cast<std::string>();
    if (name == "diagonal") return diagonal_reward(g);
    if (name == "zero") return [](StateId, ActionId) { return 0.0; };
    throw ParseError("unknown reward '" + name + "' (expected diagonal or zero)");
  }
  auto fn = reward.cast<std::function<double(StateId, ActionId)>>();
  return [fn = std::move(fn)](StateId s, ActionId a) { return fn(s, a); };
}

GridConfig make_grid_config(int n, std::optional<int> system_start, std::optional<int> env_start,
                            Player first_mover, std::optional<std::pair<int, int>> targets,
                            std::optional<int> counter_max) {
  GridConfig cfg;
  cfg.n = n;
  cfg.system_start = system_start;
  cfg.env_start = env_start;
  cfg.first_mover = first_mover;
  cfg.liveness_targets = targets;
  cfg.counter_max = counter_max;
  return cfg;
}

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Maximally permissive strategy synthesis and maximin-Q learning for "
      "two-player safety games";

  // Exception translators are consulted newest-first, so register the base
  // class before its refinements.
  const py::object base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<UnrealizableError>(m, "UnrealizableError", base.ptr());

  py::enum_<Player>(m, "Player")
      .value("SYSTEM", Player::kSystem)
      .value("ENVIRONMENT", Player::kEnvironment);

  py::class_<Game>(m, "Game")
      .def_property_readonly("num_states", &Game::num_states)
      .def_property_readonly("num_system_states", &Game::num_system_states)
      .def_property_readonly("num_transitions", &Game::num_transitions)
      .def_property_readonly("num_actions", &Game::num_actions)
      .def_property_readonly("ap", [](const Game& g) { return g.ap(); })
      .def_property_readonly("initial", [](const Game& g) { return g.initial(); })
      .def("player", &Game::player, py::arg("state"))
      .def("labels", [](const Game& g, StateId s) { return g.labels(s); }, py::arg("state"))
      .def("available", &Game::available, py::arg("state"))
      .def("step", &Game::step, py::arg("state"), py::arg("action"))
      .def("edges",
           [](const Game& g, StateId s) {
             std::vector<std::pair<ActionId, StateId>> out;
             for (const Game::Edge& e : g.edges(s)) out.emplace_back(e.action, e.to);
             return out;
           },
           py::arg("state"))
      .def("to_json", [](const Game& g) { return dump_game(g.to_data()); })
      .def_static("from_json",
                  [](const std::string& text) {
                    return Game::from_data(parse_game_data(parse_json(text, "game JSON")));
                  },
                  py::arg("text"))
      .def("__repr__", [](const Game& g) {
        return "<Game with " + std::to_string(g.num_states()) + " states (" +
               std::to_string(g.num_system_states()) + " system), " +
               std::to_string(g.num_transitions()) + " transitions>";
      });

  py::class_<SafetySpec>(m, "SafetySpec")
      .def("to_text",
           [](const SafetySpec& spec, const std::vector<std::string>& ap) {
             return spec_to_text(spec, ap);
           },
           py::arg("ap"))
      .def_static("from_text", &parse_spec_text, py::arg("text"), py::arg("ap"));

  py::class_<MemorylessStrategy>(m, "Strategy")
      .def_static("empty", &MemorylessStrategy::empty, py::arg("num_states"))
      .def_property_readonly("num_states", &MemorylessStrategy::num_states)
      .def("allowed", [](const MemorylessStrategy& mu, StateId s) { return mu.choice[s]; },
           py::arg("state"))
      .def("set_allowed",
           [](MemorylessStrategy& mu, StateId s, std::vector<ActionId> actions) {
             mu.choice[s] = std::move(actions);
           },
           py::arg("state"), py::arg("actions"))
      .def("defined", &MemorylessStrategy::defined, py::arg("state"))
      .def("permits", &MemorylessStrategy::permits, py::arg("state"), py::arg("action"))
      .def("deterministic", &MemorylessStrategy::deterministic)
      .def("to_json", [](const MemorylessStrategy& mu) { return strategy_to_json(mu).dump(2); })
      .def_static("from_json",
                  [](const std::string& text, int num_states) {
                    return parse_strategy(parse_json(text, "strategy JSON"), num_states);
                  },
                  py::arg("text"), py::arg("num_states"));

  py::class_<StateMap>(m, "StateMap")
      .def_property_readonly("to_original",
                             [](const StateMap& map) { return map.to_original; })
      .def_property_readonly("num_states", &StateMap::num_states);

  py::class_<WinningRegion>(m, "WinningRegion")
      .def("contains", &WinningRegion::contains, py::arg("state"))
      .def("allowed", [](const WinningRegion& r, StateId s) { return r.allowed[s]; },
           py::arg("state"))
      .def_readonly("edge_operations", &WinningRegion::edge_operations);

  py::class_<QTable>(m, "QTable")
      .def_readonly("gamma", &QTable::gamma)
      .def("value", &QTable::value, py::arg("game"), py::arg("state"))
      .def("at", &QTable::at, py::arg("game"), py::arg("state"), py::arg("action"))
      .def("csv", [](const QTable& q, const Game& g) { return qtable_to_csv(g, q); },
           py::arg("game"));

  py::class_<LearnResult>(m, "LearnResult")
      .def_readonly("q", &LearnResult::q)
      .def_property_readonly("values", [](const LearnResult& r) { return r.v.v; })
      .def_property_readonly("converged",
                             [](const LearnResult& r) { return r.log.converged; })
      .def_property_readonly("iterations",
                             [](const LearnResult& r) { return r.log.iterations; })
      .def_property_readonly("log", [](const LearnResult& r) { return r.log.entries; })
      .def("values_csv", [](const LearnResult& r) { return values_to_csv(r.v); })
      .def("convergence_csv", [](const LearnResult& r) { return convergence_to_csv(r.log); });

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("q", &SweepResult::q)
      .def_readonly("sweeps", &SweepResult::sweeps)
      .def_property_readonly("values", [](const SweepResult& r) { return r.v.v; });

  // Scenario builders.
  m.def("build_example1",
        [](int n, std::optional<int> system_start, std::optional<int> env_start,
           Player first_mover) {
          GridGame g = build_example1(
              make_grid_config(n, system_start, env_start, first_mover, {}, {}));
          return py::make_tuple(std::move(g.game), std::move(g.spec));
        },
        py::arg("n") = 3, py::arg("system_start") = std::nullopt,
        py::arg("env_start") = std::nullopt, py::arg("first_mover") = Player::kSystem,
        "Collision-avoidance pursuit game; returns (game, spec).");
  m.def("build_example2",
        [](int n, std::optional<std::pair<int, int>> targets) {
          GridGame2 g = build_example2(
              make_grid_config(n, {}, {}, Player::kSystem, targets, {}));
          return py::make_tuple(std::move(g.game), g.ltl);
        },
        py::arg("n") = 3, py::arg("targets") = std::nullopt,
        "Grid game plus a full-LTL objective outside the safety fragment; "
        "returns (game, ltl_text).");
  m.def("build_example3",
        [](int n, int counter_max, std::optional<std::pair<int, int>> targets) {
          GridGame3 g = build_example3(
              make_grid_config(n, {}, {}, Player::kSystem, targets, counter_max));
          return py::make_tuple(std::move(g.game), std::move(g.spec),
                                g.augment.origin_state, g.augment.counter);
        },
        py::arg("n") = 3, py::arg("counter_max") = 4, py::arg("targets") = std::nullopt,
        "Counter-augmented recurring-visit game; returns (game, spec, origin, counter).");

  // Synthesis and restriction.
  m.def("synthesize",
        [](const Game& g, const SafetySpec& spec) {
          WinningRegion region;
          MemorylessStrategy mu = maximally_permissive(g, spec, &region);
          return py::make_tuple(std::move(mu), std::move(region));
        },
        py::arg("game"), py::arg("spec"),
        "Maximally permissive strategy plus the winning region; raises "
        "UnrealizableError when an initial state cannot be kept safe.");
  m.def("restrict",
        [](const Game& g, const MemorylessStrategy& mu) {
          auto [ghat, map] = apply_strategy(g, mu);
          return py::make_tuple(std::move(ghat), std::move(map));
        },
        py::arg("game"), py::arg("strategy"),
        "Deletes every forbidden system edge; returns (restricted_game, state_map).");
  m.def("lift_strategy", &lift_strategy, py::arg("state_map"), py::arg("strategy"),
        py::arg("num_original_states"),
        "Maps a strategy on the restricted game back to the original state ids.");

  // Learning and evaluation.
  m.def("learn",
        [](const Game& g, const py::object& reward, double gamma, std::uint64_t seed,
           std::int64_t max_iterations, int episode_length, std::int64_t window,
           double threshold, double epsilon_start, double epsilon_end,
           double epsilon_anneal_frac, double alpha_scale, double alpha_exponent) {
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
          return maximin_q_learn(g, resolve_reward(g, reward), cfg);
        },
        py::arg("game"), py::arg("reward") = "diagonal", py::arg("gamma") = 0.9,
        py::arg("seed") = 0, py::arg("max_iterations") = 0, py::arg("episode_length") = 100,
        py::arg("window") = 10000, py::arg("threshold") = 5e-5,
        py::arg("epsilon_start") = 1.0, py::arg("epsilon_end") = 0.3,
        py::arg("epsilon_anneal_frac") = 0.5, py::arg("alpha_scale") = 100.0,
        py::arg("alpha_exponent") = 0.6,
        "Maximin-Q learning; reward is 'diagonal', 'zero', or a callable "
        "(state, action) -> float queried at system pairs.");
  m.def("value_iteration",
        [](const Game& g, const py::object& reward, double gamma, double tol, int max_sweeps) {
          const RewardTable table = RewardTable::from_fn(g, resolve_reward(g, reward));
          return maximin_value_iteration(g, table, gamma, tol, max_sweeps);
        },
        py::arg("game"), py::arg("reward") = "diagonal", py::arg("gamma") = 0.9,
        py::arg("tol") = 1e-12, py::arg("max_sweeps") = 1000000,
        "Exact maximin fixed point by synchronous sweeps.");
  m.def("greedy_strategy", &greedy_strategy, py::arg("game"), py::arg("q"),
        "Deterministic argmax strategy; ties break to the lowest action id.");
  m.def("worst_case_reward",
        [](const Game& g, const MemorylessStrategy& mu, const py::object& reward, StateId from,
           double gamma, int horizon) {
          const RewardTable table = RewardTable::from_fn(g, resolve_reward(g, reward));
          const RewardBounds b = worst_case_reward(g, mu, table, from, gamma, horizon);
          return py::make_tuple(b.lower, b.upper);
        },
        py::arg("game"), py::arg("strategy"), py::arg("reward"), py::arg("state"),
        py::arg("gamma") = 0.9, py::arg("horizon") = 30,
        "Adversarial discounted reward of a deterministic strategy; returns "
        "(lower, upper) bracketing the infinite-horizon value.");

  // Verification oracles.
  m.def("is_winning_strategy", &is_winning_strategy, py::arg("game"), py::arg("spec"),
        py::arg("strategy"));
  m.def("check_envelope_sound", &check_envelope_sound, py::arg("game"), py::arg("spec"),
        py::arg("strategy"), py::arg("depth"),
        "Empty string when every permitted run prefix is safe; else the first "
        "violation found.");
  m.def("enumerate_winning_strategies", &enumerate_winning_strategies, py::arg("game"),
        py::arg("spec"), py::arg("limit") = 1000000,
        "All deterministic memoryless winning strategies, by exhaustive search.");
  m.def("strategy_includes", &strategy_includes, py::arg("game"), py::arg("outer"),
        py::arg("inner"),
        "True when every action the inner strategy permits is permitted by the outer one.");
}
