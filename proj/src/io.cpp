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

#include "permrl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "permrl/errors.hpp"

namespace permrl {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Strict field access with path-bearing diagnostics.
const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

int int_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) {
    throw ParseError(where + ": field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

std::string string_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

const json& array_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array()) throw ParseError(where + ": field '" + key + "' must be an array");
  return v;
}

Player parse_player(const std::string& text, const std::string& where) {
  if (text == "system") return Player::kSystem;
  if (text == "environment") return Player::kEnvironment;
  throw ParseError(where + ": player must be \"system\" or \"environment\", got \"" + text +
                   "\"");
}

}  // namespace

nlohmann::ordered_json game_data_to_json(const GameData& data) {
  ordered_json j;
  j["states"] = ordered_json::array();
  for (const auto& st : data.states) {
    ordered_json s;
    s["id"] = st.id;
    s["player"] = to_string(st.player);
    s["labels"] = st.labels;
    j["states"].push_back(std::move(s));
  }
  j["initial"] = data.initial;
  j["actions"] = ordered_json::array();
  for (const auto& a : data.actions) {
    ordered_json e;
    e["id"] = a.id;
    e["owner"] = to_string(a.owner);
    e["name"] = a.name;
    j["actions"].push_back(std::move(e));
  }
  j["transitions"] = ordered_json::array();
  for (const auto& t : data.transitions) {
    ordered_json e;
    e["from"] = t.from;
    e["action"] = t.action;
    e["to"] = t.to;
    j["transitions"].push_back(std::move(e));
  }
  j["ap"] = data.ap;
  return j;
}

GameData parse_game_data(const json& j) {
  if (!j.is_object()) throw ParseError("game: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "states" && key != "initial" && key != "actions" && key != "transitions" &&
        key != "ap") {
      throw ParseError("game: unknown field '" + key + "'");
    }
  }
  GameData data;
  int idx = 0;
  for (const json& s : array_field(j, "states", "game")) {
    const std::string where = "game.states[" + std::to_string(idx++) + "]";
    GameData::State st;
    st.id = int_field(s, "id", where);
    st.player = parse_player(string_field(s, "player", where), where);
    for (const json& lbl : array_field(s, "labels", where)) {
      if (!lbl.is_number_integer()) throw ParseError(where + ": labels must be integers");
      st.labels.push_back(lbl.get<int>());
    }
    data.states.push_back(std::move(st));
  }
  idx = 0;
  for (const json& s : array_field(j, "initial", "game")) {
    if (!s.is_number_integer()) {
      throw ParseError("game.initial[" + std::to_string(idx) + "] must be an integer");
    }
    data.initial.push_back(s.get<StateId>());
    idx++;
  }
  idx = 0;
  for (const json& a : array_field(j, "actions", "game")) {
    const std::string where = "game.actions[" + std::to_string(idx++) + "]";
    ActionInfo info;
    info.id = int_field(a, "id", where);
    info.owner = parse_player(string_field(a, "owner", where), where);
    info.name = string_field(a, "name", where);
    data.actions.push_back(std::move(info));
  }
  idx = 0;
  for (const json& t : array_field(j, "transitions", "game")) {
    const std::string where = "game.transitions[" + std::to_string(idx++) + "]";
    GameData::Transition tr;
    tr.from = int_field(t, "from", where);
    tr.action = int_field(t, "action", where);
    tr.to = int_field(t, "to", where);
    data.transitions.push_back(tr);
  }
  for (const json& p : array_field(j, "ap", "game")) {
    if (!p.is_string()) throw ParseError("game.ap entries must be strings");
    data.ap.push_back(p.get<std::string>());
  }
  return data;
}

std::string dump_game(const GameData& data) { return game_data_to_json(data).dump(2) + "\n"; }

GameData load_game_file(const std::string& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("game file '" + path + "': " + e.what());
  }
  return parse_game_data(j);
}

void save_game_file(const std::string& path, const GameData& data) {
  write_text_file(path, dump_game(data));
}

nlohmann::ordered_json strategy_to_json(const MemorylessStrategy& mu) {
  ordered_json allowed = ordered_json::object();
  for (StateId s = 0; s < mu.num_states(); ++s) {
    if (!mu.choice[s].empty()) allowed[std::to_string(s)] = mu.choice[s];
  }
  ordered_json j;
  j["type"] = "memoryless";
  j["allowed"] = std::move(allowed);
  return j;
}

MemorylessStrategy parse_strategy(const json& j, int num_states) {
  if (string_field(j, "type", "strategy") != "memoryless") {
    throw ParseError("strategy: unsupported type '" + string_field(j, "type", "strategy") + "'");
  }
  const json& allowed = field(j, "allowed", "strategy");
  if (!allowed.is_object()) throw ParseError("strategy: 'allowed' must be an object");
  MemorylessStrategy mu = MemorylessStrategy::empty(num_states);
  for (const auto& [key, value] : allowed.items()) {
    int s;
    try {
      size_t used = 0;
      s = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParseError("strategy: state key '" + key + "' is not an integer");
    }
    if (s < 0 || s >= num_states) {
      throw ParseError("strategy: state " + key + " is outside the game (" +
                       std::to_string(num_states) + " states)");
    }
    if (!value.is_array()) throw ParseError("strategy: allowed[" + key + "] must be an array");
    for (const json& a : value) {
      if (!a.is_number_integer()) {
        throw ParseError("strategy: allowed[" + key + "] entries must be integers");
      }
      mu.choice[s].push_back(a.get<ActionId>());
    }
    std::sort(mu.choice[s].begin(), mu.choice[s].end());
    mu.choice[s].erase(std::unique(mu.choice[s].begin(), mu.choice[s].end()),
                       mu.choice[s].end());
  }
  return mu;
}

MemorylessStrategy load_strategy_file(const std::string& path, int num_states) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("strategy file '" + path + "': " + e.what());
  }
  return parse_strategy(j, num_states);
}

void save_strategy_file(const std::string& path, const MemorylessStrategy& mu) {
  write_text_file(path, strategy_to_json(mu).dump(2) + "\n");
}

nlohmann::ordered_json statemap_to_json(const StateMap& map) {
  ordered_json j = ordered_json::object();
  for (StateId s = 0; s < map.num_states(); ++s) {
    j[std::to_string(s)] = map.to_original[s];
  }
  return j;
}

StateMap parse_statemap(const json& j) {
  if (!j.is_object()) throw ParseError("state map: top level must be an object");
  std::map<int, StateId> entries;
  for (const auto& [key, value] : j.items()) {
    int s;
    try {
      size_t used = 0;
      s = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParseError("state map: key '" + key + "' is not an integer");
    }
    if (!value.is_number_integer()) {
      throw ParseError("state map: value for '" + key + "' must be an integer");
    }
    entries[s] = value.get<StateId>();
  }
  StateMap map;
  int expected = 0;
  for (const auto& [s, orig] : entries) {
    if (s != expected++) throw ParseError("state map: keys must cover 0..n-1 densely");
    map.to_original.push_back(orig);
  }
  return map;
}

StateMap load_statemap_file(const std::string& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("state map file '" + path + "': " + e.what());
  }
  return parse_statemap(j);
}

void save_statemap_file(const std::string& path, const StateMap& map) {
  write_text_file(path, statemap_to_json(map).dump(2) + "\n");
}

SafetySpec parse_spec_text(const std::string& text, const std::vector<std::string>& ap) {
  std::istringstream in(text);
  std::string line;
  std::string phi0_text;
  std::string phi1_text;
  bool have_phi0 = false;
  bool have_phi1 = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ParseError("spec line " + std::to_string(lineno) + ": expected 'phi0:' or 'phi1:'");
    }
    std::string key = line.substr(first, colon - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::string value = line.substr(colon + 1);
    if (key == "phi0") {
      if (have_phi0) throw ParseError("spec line " + std::to_string(lineno) + ": duplicate phi0");
      phi0_text = value;
      have_phi0 = true;
    } else if (key == "phi1") {
      if (have_phi1) throw ParseError("spec line " + std::to_string(lineno) + ": duplicate phi1");
      phi1_text = value;
      have_phi1 = true;
    } else {
      throw ParseError("spec line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_phi0 || !have_phi1) throw ParseError("spec must define both phi0 and phi1");
  SafetySpec spec;
  spec.initial = Assertion::parse(phi0_text, ap, /*allow_next=*/false);
  spec.invariant = Assertion::parse(phi1_text, ap, /*allow_next=*/true);
  return spec;
}

SafetySpec load_spec_file(const std::string& path, const std::vector<std::string>& ap) {
  return parse_spec_text(read_text_file(path), ap);
}

std::string spec_to_text(const SafetySpec& spec, const std::vector<std::string>& ap) {
  return "phi0: " + spec.initial.to_string(ap) + "\nphi1: " + spec.invariant.to_string(ap) +
         "\n";
}

void save_spec_file(const std::string& path, const SafetySpec& spec,
                    const std::vector<std::string>& ap) {
  write_text_file(path, spec_to_text(spec, ap));
}

std::string format_double(double x) {
  // Shortest fixed/scientific form that parses back to the same bits.
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string convergence_to_csv(const ConvergenceLog& log) {
  std::string out = "iteration,max_delta_v\n";
  for (const auto& [iter, delta] : log.entries) {
    out += std::to_string(iter) + "," + format_double(delta) + "\n";
  }
  return out;
}

std::string qtable_to_csv(const Game& g, const QTable& q) {
  std::string out = "state,action,q\n";
  for (StateId s = 0; s < g.num_states(); ++s) {
    const auto es = g.edges(s);
    for (int k = 0; k < static_cast<int>(es.size()); ++k) {
      out += std::to_string(s) + "," + std::to_string(es[k].action) + "," +
             format_double(q.q[s][k]) + "\n";
    }
  }
  return out;
}

std::string values_to_csv(const ValueFunction& v) {
  std::string out = "state,v\n";
  for (size_t s = 0; s < v.v.size(); ++s) {
    out += std::to_string(s) + "," + format_double(v.v[s]) + "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file '" + path + "'");
  out << content;
  if (!out) throw ParseError("write failed for '" + path + "'");
}

}  // namespace permrl
