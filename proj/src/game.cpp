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

#include "permrl/game.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "permrl/errors.hpp"
#include "permrl/log.hpp"

namespace permrl {

std::string to_string(Player p) {
  return p == Player::kSystem ? "system" : "environment";
}

namespace {

// Shared structural scan over raw data; `issues` collects hard violations.
struct RawIndex {
  std::unordered_map<StateId, int> state_pos;    // id -> index in data.states
  std::unordered_map<ActionId, int> action_pos;  // id -> index in data.actions
  // adjacency over data.states indices, for reachability
  std::vector<std::vector<int>> succ;
  std::vector<int> out_degree;
};

RawIndex scan(const GameData& data, std::vector<std::string>& issues) {
  RawIndex ix;
  for (int i = 0; i < static_cast<int>(data.states.size()); ++i) {
    const auto& st = data.states[i];
    if (st.id < 0) issues.push_back("state id " + std::to_string(st.id) + " is negative");
    if (!ix.state_pos.emplace(st.id, i).second) {
      issues.push_back("duplicate state id " + std::to_string(st.id));
    }
    for (int lbl : st.labels) {
      if (lbl < 0 || lbl >= static_cast<int>(data.ap.size())) {
        issues.push_back("state " + std::to_string(st.id) + " has label index " +
                         std::to_string(lbl) + " outside the proposition table");
      }
    }
  }
  {
    std::unordered_set<std::string> names;
    for (const auto& name : data.ap) {
      if (!names.insert(name).second) issues.push_back("duplicate proposition name '" + name + "'");
    }
  }
  for (int i = 0; i < static_cast<int>(data.actions.size()); ++i) {
    const auto& ai = data.actions[i];
    if (ai.id < 0) issues.push_back("action id " + std::to_string(ai.id) + " is negative");
    if (!ix.action_pos.emplace(ai.id, i).second) {
      issues.push_back("duplicate action id " + std::to_string(ai.id));
    }
  }
  if (data.initial.empty()) issues.push_back("initial state set is empty");
  for (StateId s : data.initial) {
    if (!ix.state_pos.count(s)) {
      issues.push_back("initial state " + std::to_string(s) + " is not a declared state");
    }
  }

  ix.succ.resize(data.states.size());
  ix.out_degree.assign(data.states.size(), 0);
  std::map<std::pair<StateId, ActionId>, StateId> seen;
  for (const auto& tr : data.transitions) {
    auto from_it = ix.state_pos.find(tr.from);
    auto to_it = ix.state_pos.find(tr.to);
    auto act_it = ix.action_pos.find(tr.action);
    bool ok = true;
    if (from_it == ix.state_pos.end()) {
      issues.push_back("transition from undeclared state " + std::to_string(tr.from));
      ok = false;
    }
    if (to_it == ix.state_pos.end()) {
      issues.push_back("transition to undeclared state " + std::to_string(tr.to));
      ok = false;
    }
    if (act_it == ix.action_pos.end()) {
      issues.push_back("transition uses undeclared action " + std::to_string(tr.action));
      ok = false;
    }
    if (!ok) continue;
    const auto& owner = data.actions[act_it->second].owner;
    const auto& from_state = data.states[from_it->second];
    if (owner != from_state.player) {
      issues.push_back("state " + std::to_string(tr.from) + " (" + to_string(from_state.player) +
                       ") uses action " + std::to_string(tr.action) + " owned by " +
                       to_string(owner));
    }
    auto [it, inserted] = seen.emplace(std::make_pair(tr.from, tr.action), tr.to);
    if (!inserted) {
      if (it->second != tr.to) {
        issues.push_back("nondeterministic transition: state " + std::to_string(tr.from) +
                         ", action " + std::to_string(tr.action) + " goes to both " +
                         std::to_string(it->second) + " and " + std::to_string(tr.to));
      }
      continue;  // exact duplicate row: ignored
    }
    ix.succ[from_it->second].push_back(to_it->second);
    ix.out_degree[from_it->second]++;
  }
  return ix;
}

// Positions (into data.states) reachable from the initial set.
std::vector<char> reachable_set(const GameData& data, const RawIndex& ix) {
  std::vector<char> seen(data.states.size(), 0);
  std::vector<int> queue;
  for (StateId s : data.initial) {
    auto it = ix.state_pos.find(s);
    if (it == ix.state_pos.end()) continue;
    if (!seen[it->second]) {
      seen[it->second] = 1;
      queue.push_back(it->second);
    }
  }
  for (size_t h = 0; h < queue.size(); ++h) {
    for (int nxt : ix.succ[queue[h]]) {
      if (!seen[nxt]) {
        seen[nxt] = 1;
        queue.push_back(nxt);
      }
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate_game(const GameData& data) {
  ValidationReport report;
  RawIndex ix = scan(data, report.issues);
  if (!report.issues.empty()) return report;
  for (int i = 0; i < static_cast<int>(data.states.size()); ++i) {
    if (ix.out_degree[i] == 0) report.dead_ends.push_back(data.states[i].id);
  }
  std::sort(report.dead_ends.begin(), report.dead_ends.end());
  const std::vector<char> seen = reachable_set(data, ix);
  for (char c : seen) {
    if (!c) report.unreachable++;
  }
  return report;
}

Game Game::from_data(const GameData& data, BuildReport* report) {
  std::vector<std::string> issues;
  RawIndex ix = scan(data, issues);
  if (!issues.empty()) {
    std::ostringstream oss;
    oss << "malformed game:";
    for (const auto& s : issues) oss << "\n  - " << s;
    throw ModelError(oss.str());
  }
  // Action ids must be dense so downstream tables can index by them.
  for (const auto& ai : data.actions) {
    if (ai.id >= static_cast<int>(data.actions.size())) {
      throw ModelError("action ids are not contiguous from 0: id " + std::to_string(ai.id) +
                       " with only " + std::to_string(data.actions.size()) + " actions");
    }
  }

  const std::vector<char> seen = reachable_set(data, ix);

  // Keep reachable states, renumbered densely in ascending original-id order.
  std::vector<int> kept_positions;
  for (const auto& [id, pos] : std::map<StateId, int>(ix.state_pos.begin(), ix.state_pos.end())) {
    if (seen[pos]) kept_positions.push_back(pos);
  }

  Game g;
  std::unordered_map<StateId, StateId> renum;  // original id -> new id
  renum.reserve(kept_positions.size());
  for (int pos : kept_positions) {
    const StateId new_id = static_cast<StateId>(renum.size());
    renum[data.states[pos].id] = new_id;
  }

  g.ap_ = data.ap;
  g.actions_.resize(data.actions.size());
  for (const auto& ai : data.actions) g.actions_[ai.id] = ai;

  const int n = static_cast<int>(kept_positions.size());
  g.player_.resize(n);
  g.labels_.resize(n);
  g.label_bits_.resize(n);
  for (int pos : kept_positions) {
    const auto& st = data.states[pos];
    const StateId id = renum.at(st.id);
    g.player_[id] = st.player;
    std::vector<int> labels = st.labels;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    g.labels_[id] = std::move(labels);
    g.label_bits_[id] = LabelBits(static_cast<int>(g.ap_.size()), g.labels_[id]);
    if (st.player == Player::kSystem) g.num_system_states_++;
  }

  {
    std::set<StateId> init;
    for (StateId s : data.initial) init.insert(renum.at(s));
    g.initial_.assign(init.begin(), init.end());
  }

  std::vector<std::vector<Edge>> adj(n);
  {
    std::set<std::pair<StateId, ActionId>> emitted;
    for (const auto& tr : data.transitions) {
      auto from = renum.find(tr.from);
      if (from == renum.end()) continue;  // source was unreachable
      if (!emitted.insert({from->second, tr.action}).second) continue;
      adj[from->second].push_back({tr.action, renum.at(tr.to)});
    }
  }
  g.edge_begin_.assign(n + 1, 0);
  for (int s = 0; s < n; ++s) {
    std::sort(adj[s].begin(), adj[s].end(),
              [](const Edge& a, const Edge& b) { return a.action < b.action; });
    g.edge_begin_[s + 1] = g.edge_begin_[s] + static_cast<int>(adj[s].size());
  }
  g.edge_pool_.reserve(g.edge_begin_[n]);
  for (int s = 0; s < n; ++s) {
    g.edge_pool_.insert(g.edge_pool_.end(), adj[s].begin(), adj[s].end());
  }

  if (report != nullptr) {
    report->pruned_unreachable = static_cast<int>(data.states.size()) - n;
    report->dead_ends.clear();
    report->kept_to_original.resize(n);
    for (int pos : kept_positions) {
      report->kept_to_original[renum.at(data.states[pos].id)] = data.states[pos].id;
    }
    for (StateId s = 0; s < n; ++s) {
      if (g.edges(s).empty()) report->dead_ends.push_back(s);
    }
  }
  const int pruned = static_cast<int>(data.states.size()) - n;
  if (pruned > 0) {
    log::info("pruned " + std::to_string(pruned) + " unreachable state(s) at construction");
  }
  return g;
}

std::vector<ActionId> Game::available(StateId s) const {
  std::vector<ActionId> out;
  for (const Edge& e : edges(s)) out.push_back(e.action);
  return out;
}

int Game::ap_index(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(ap_.size()); ++i) {
    if (ap_[i] == name) return i;
  }
  return -1;
}

int Game::edge_slot(StateId s, ActionId a) const {
  const auto es = edges(s);
  int lo = 0;
  int hi = static_cast<int>(es.size()) - 1;
  while (lo <= hi) {
    const int mid = (lo + hi) / 2;
    if (es[mid].action == a) return mid;
    if (es[mid].action < a) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return -1;
}

StateId Game::step(StateId s, ActionId a) const {
  if (s < 0 || s >= num_states()) throw ModelError("step: state " + std::to_string(s) + " out of range");
  const int slot = edge_slot(s, a);
  if (slot < 0) {
    throw ModelError("step: action " + std::to_string(a) + " is not available at state " +
                     std::to_string(s));
  }
  return edges(s)[slot].to;
}

GameData Game::to_data() const {
  GameData data;
  data.ap = ap_;
  data.actions = actions_;
  data.initial = initial_;
  data.states.reserve(num_states());
  for (StateId s = 0; s < num_states(); ++s) {
    data.states.push_back({s, player_[s], labels_[s]});
  }
  data.transitions.reserve(edge_pool_.size());
  for (StateId s = 0; s < num_states(); ++s) {
    for (const Edge& e : edges(s)) data.transitions.push_back({s, e.action, e.to});
  }
  return data;
}

}  // namespace permrl
