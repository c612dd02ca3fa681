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

#ifndef PERMRL_IO_HPP_
#define PERMRL_IO_HPP_

#include <string>

#include <json.hpp>

#include "permrl/game.hpp"
#include "permrl/learn.hpp"
#include "permrl/restrict.hpp"
#include "permrl/safety.hpp"
#include "permrl/strategy.hpp"

namespace permrl {

// Serialization of every on-disk format. All emitters are deterministic:
// fixed key order (alphabetical, via ordered JSON), entries sorted by id,
// shortest-round-trip float rendering.

// Game JSON:
//   {"states":[{"id":..,"player":"system"|"environment","labels":[..]}],
//    "initial":[..], "actions":[{"id":..,"owner":..,"name":..}],
//    "transitions":[{"from":..,"action":..,"to":..}], "ap":[..]}
// Labels are indices into "ap". parse_game_data accepts entries in any order
// and preserves them; game_data_to_json emits them verbatim, so
// parse -> serialize is byte-stable. Game::to_data produces id-sorted data.
nlohmann::ordered_json game_data_to_json(const GameData& data);
GameData parse_game_data(const nlohmann::json& j);

std::string dump_game(const GameData& data);
GameData load_game_file(const std::string& path);
void save_game_file(const std::string& path, const GameData& data);

// Strategy JSON: {"type":"memoryless","allowed":{"<state_id>":[action_ids]}}.
// Only defined states appear; keys are decimal state ids, emitted in numeric
// order.
nlohmann::ordered_json strategy_to_json(const MemorylessStrategy& mu);
MemorylessStrategy parse_strategy(const nlohmann::json& j, int num_states);
MemorylessStrategy load_strategy_file(const std::string& path, int num_states);
void save_strategy_file(const std::string& path, const MemorylessStrategy& mu);

// State-map sidecar: {"<restricted_id>": original_id}.
nlohmann::ordered_json statemap_to_json(const StateMap& map);
StateMap parse_statemap(const nlohmann::json& j);
StateMap load_statemap_file(const std::string& path);
void save_statemap_file(const std::string& path, const StateMap& map);

// Safety spec text: two assignments, one per line,
//   phi0: <formula over current propositions>
//   phi1: <formula, X <name> marks a next-step proposition>
// Blank lines and lines starting with '#' are ignored.
SafetySpec parse_spec_text(const std::string& text, const std::vector<std::string>& ap);
SafetySpec load_spec_file(const std::string& path, const std::vector<std::string>& ap);
std::string spec_to_text(const SafetySpec& spec, const std::vector<std::string>& ap);
void save_spec_file(const std::string& path, const SafetySpec& spec,
                    const std::vector<std::string>& ap);

// CSV dumps, one row per entry, stable ordering by id:
//   convergence: "iteration,max_delta_v"
//   Q table:     "state,action,q"
//   values:      "state,v"
std::string convergence_to_csv(const ConvergenceLog& log);
std::string qtable_to_csv(const Game& g, const QTable& q);
std::string values_to_csv(const ValueFunction& v);

// Shortest decimal rendering that parses back to the same double.
std::string format_double(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace permrl

#endif  // PERMRL_IO_HPP_
