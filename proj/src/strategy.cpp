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

#include "permrl/strategy.hpp"

#include <algorithm>
#include <string>

#include "permrl/errors.hpp"

namespace permrl {

bool MemorylessStrategy::deterministic() const {
  for (const auto& set : choice) {
    if (set.size() > 1) return false;
  }
  return true;
}

bool MemorylessStrategy::permits(StateId s, ActionId a) const {
  if (s < 0 || s >= num_states()) return false;
  return std::binary_search(choice[s].begin(), choice[s].end(), a);
}

FoldResult fold_memory(const Game& g, const FiniteMemoryStrategy& fms) {
  const int m_size = fms.memory_size;
  if (m_size < 1) throw ModelError("fold_memory: memory_size must be at least 1");
  if (fms.initial_memory < 0 || fms.initial_memory >= m_size) {
    throw ModelError("fold_memory: initial memory out of range");
  }
  const int slots = g.num_states() * m_size;
  if (static_cast<int>(fms.update.size()) != slots ||
      static_cast<int>(fms.act.size()) != slots) {
    throw ModelError("fold_memory: act/update tables must cover every (state, memory) pair");
  }
  for (int i = 0; i < slots; ++i) {
    if (fms.update[i] < 0 || fms.update[i] >= m_size) {
      throw ModelError("fold_memory: memory update out of range at slot " + std::to_string(i));
    }
  }

  // Product arena over (state, memory); raw id = state * m_size + memory.
  // The memory is rewritten on arrival: (s, m) -a-> (s', update(s', m)).
  GameData data;
  data.ap = g.ap();
  const int mem_ap_base = static_cast<int>(data.ap.size());
  for (int m = 0; m < m_size; ++m) data.ap.push_back("mem_" + std::to_string(m));
  data.actions = g.actions();
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (int m = 0; m < m_size; ++m) {
      GameData::State st;
      st.id = fms.index(s, m);
      st.player = g.player(s);
      st.labels = g.labels(s);
      st.labels.push_back(mem_ap_base + m);
      data.states.push_back(st);
      for (const Game::Edge& e : g.edges(s)) {
        const int m_next = fms.update[fms.index(e.to, m)];
        data.transitions.push_back({st.id, e.action, fms.index(e.to, m_next)});
      }
    }
  }
  for (StateId i : g.initial()) data.initial.push_back(fms.index(i, fms.initial_memory));

  FoldResult out;
  BuildReport report;
  out.game = Game::from_data(data, &report);
  out.origin_state.resize(out.game.num_states());
  out.origin_memory.resize(out.game.num_states());
  out.strategy = MemorylessStrategy::empty(out.game.num_states());
  for (StateId p = 0; p < out.game.num_states(); ++p) {
    const StateId raw = report.kept_to_original[p];
    const StateId s = raw / m_size;
    const int m = raw % m_size;
    out.origin_state[p] = s;
    out.origin_memory[p] = m;
    if (g.player(s) != Player::kSystem) continue;
    std::vector<ActionId> acts = fms.act[raw];
    std::sort(acts.begin(), acts.end());
    acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
    for (ActionId a : acts) {
      if (out.game.edge_slot(p, a) < 0) {
        throw ModelError("fold_memory: act(" + std::to_string(s) + "," + std::to_string(m) +
                         ") permits unavailable action " + std::to_string(a));
      }
    }
    out.strategy.choice[p] = std::move(acts);
  }
  return out;
}

namespace {

void collect_runs(const Game& g, const MemorylessStrategy& mu, int depth, const RewardFn& reward,
                  RunTrace& prefix, std::vector<RunTrace>& out) {
  if (prefix.length() == depth) {
    out.push_back(prefix);
    return;
  }
  const StateId s = prefix.states.back();
  const Player who = g.player(s);
  std::vector<ActionId> moves;
  if (who == Player::kSystem) {
    if (s < mu.num_states()) {
      for (ActionId a : mu.choice[s]) {
        if (g.edge_slot(s, a) >= 0) moves.push_back(a);
      }
    }
  } else {
    for (const Game::Edge& e : g.edges(s)) moves.push_back(e.action);
  }
  if (moves.empty()) {
    throw ModelError("induced_runs: state " + std::to_string(s) + " (" + to_string(who) +
                     ") has no permitted action after " + std::to_string(prefix.length()) +
                     " step(s)");
  }
  for (ActionId a : moves) {
    const StateId next = g.step(s, a);
    prefix.states.push_back(next);
    prefix.actions.push_back(a);
    prefix.movers.push_back(who);
    prefix.rewards.push_back(who == Player::kSystem && reward ? reward(s, a) : 0.0);
    collect_runs(g, mu, depth, reward, prefix, out);
    prefix.states.pop_back();
    prefix.actions.pop_back();
    prefix.movers.pop_back();
    prefix.rewards.pop_back();
  }
}

}  // namespace

std::vector<RunTrace> induced_runs(const Game& g, const MemorylessStrategy& mu, StateId from,
                                   int depth, const RewardFn& reward) {
  if (from < 0 || from >= g.num_states()) {
    throw ModelError("induced_runs: start state out of range");
  }
  if (depth < 0) throw ModelError("induced_runs: depth must be non-negative");
  std::vector<RunTrace> out;
  RunTrace prefix;
  prefix.states.push_back(from);
  collect_runs(g, mu, depth, reward, prefix, out);
  return out;
}

bool strategy_includes(const Game& g, const MemorylessStrategy& mu1,
                       const MemorylessStrategy& mu2) {
  std::vector<char> seen(g.num_states(), 0);
  std::vector<StateId> queue;
  for (StateId i : g.initial()) {
    if (!seen[i]) {
      seen[i] = 1;
      queue.push_back(i);
    }
  }
  for (size_t h = 0; h < queue.size(); ++h) {
    const StateId s = queue[h];
    std::vector<StateId> next;
    if (g.player(s) == Player::kSystem) {
      if (s >= mu2.num_states()) continue;
      for (ActionId a : mu2.choice[s]) {
        if (g.edge_slot(s, a) < 0) continue;  // induces no run
        if (!mu1.permits(s, a)) return false;
        next.push_back(g.step(s, a));
      }
    } else {
      for (const Game::Edge& e : g.edges(s)) next.push_back(e.to);
    }
    for (StateId t : next) {
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  }
  return true;
}

}  // namespace permrl
