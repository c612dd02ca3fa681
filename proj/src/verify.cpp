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

#include "permrl/verify.hpp"

#include <string>

#include "permrl/errors.hpp"

namespace permrl {

namespace {

bool edge_ok(const Game& g, const SafetySpec& spec, StateId s, StateId t) {
  return spec.invariant.eval(g.label_bits(s), g.label_bits(t));
}

}  // namespace

bool is_winning_strategy(const Game& g, const SafetySpec& spec, const MemorylessStrategy& mu) {
  std::vector<char> seen(g.num_states(), 0);
  std::vector<StateId> queue;
  for (StateId i : g.initial()) {
    if (!spec.initial.eval(g.label_bits(i), g.label_bits(i))) return false;
    if (!seen[i]) {
      seen[i] = 1;
      queue.push_back(i);
    }
  }
  for (size_t h = 0; h < queue.size(); ++h) {
    const StateId s = queue[h];
    std::vector<StateId> next;
    if (g.player(s) == Player::kSystem) {
      for (ActionId a : (s < mu.num_states() ? mu.choice[s] : std::vector<ActionId>{})) {
        if (g.edge_slot(s, a) < 0) continue;
        const StateId t = g.step(s, a);
        if (!edge_ok(g, spec, s, t)) return false;
        next.push_back(t);
      }
      if (next.empty()) return false;  // stuck: no infinite run
    } else {
      if (g.edges(s).empty()) return false;
      for (const Game::Edge& e : g.edges(s)) {
        if (!edge_ok(g, spec, s, e.to)) return false;
        next.push_back(e.to);
      }
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

WinningRegion naive_winning_region(const Game& g, const SafetySpec& spec) {
  WinningRegion region;
  const int n = g.num_states();
  region.member.assign(n, 1);
  region.allowed.resize(n);
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (!region.member[s]) continue;
      bool ok;
      if (g.player(s) == Player::kSystem) {
        ok = false;
        for (const Game::Edge& e : g.edges(s)) {
          region.edge_operations++;
          if (edge_ok(g, spec, s, e.to) && region.member[e.to]) ok = true;
        }
      } else {
        ok = !g.edges(s).empty();
        for (const Game::Edge& e : g.edges(s)) {
          region.edge_operations++;
          if (!edge_ok(g, spec, s, e.to) || !region.member[e.to]) ok = false;
        }
      }
      if (!ok) {
        region.member[s] = 0;
        changed = true;
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (!region.member[s] || g.player(s) != Player::kSystem) continue;
    for (const Game::Edge& e : g.edges(s)) {
      if (edge_ok(g, spec, s, e.to) && region.member[e.to]) {
        region.allowed[s].push_back(e.action);
      }
    }
  }
  return region;
}

std::vector<MemorylessStrategy> enumerate_winning_strategies(const Game& g,
                                                             const SafetySpec& spec,
                                                             std::int64_t limit) {
  std::vector<StateId> slots;  // system states with at least one action
  std::int64_t combos = 1;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.player(s) != Player::kSystem || g.edges(s).empty()) continue;
    slots.push_back(s);
    combos *= static_cast<std::int64_t>(g.edges(s).size());
    if (combos > limit) {
      throw ModelError("enumerate_winning_strategies: " + std::to_string(combos) +
                       " combinations exceed the limit of " + std::to_string(limit));
    }
  }

  std::vector<MemorylessStrategy> winners;
  std::vector<int> pick(slots.size(), 0);
  while (true) {
    MemorylessStrategy mu = MemorylessStrategy::empty(g.num_states());
    for (size_t i = 0; i < slots.size(); ++i) {
      mu.choice[slots[i]] = {g.edges(slots[i])[pick[i]].action};
    }
    if (is_winning_strategy(g, spec, mu)) winners.push_back(std::move(mu));
    // Odometer increment.
    size_t i = 0;
    for (; i < slots.size(); ++i) {
      if (++pick[i] < static_cast<int>(g.edges(slots[i]).size())) break;
      pick[i] = 0;
    }
    if (i == slots.size()) break;
  }
  return winners;
}

std::string check_envelope_sound(const Game& g, const SafetySpec& spec,
                                 const MemorylessStrategy& mu, int depth) {
  for (StateId i : g.initial()) {
    if (!spec.initial.eval(g.label_bits(i), g.label_bits(i))) {
      return "initial state " + std::to_string(i) + " violates the state constraint";
    }
  }
  std::vector<char> seen(g.num_states(), 0);
  std::vector<StateId> frontier;
  for (StateId i : g.initial()) {
    if (!seen[i]) {
      seen[i] = 1;
      frontier.push_back(i);
    }
  }
  for (int layer = 0; layer < depth && !frontier.empty(); ++layer) {
    std::vector<StateId> next_frontier;
    for (StateId s : frontier) {
      std::vector<StateId> next;
      if (g.player(s) == Player::kSystem) {
        for (ActionId a : (s < mu.num_states() ? mu.choice[s] : std::vector<ActionId>{})) {
          if (g.edge_slot(s, a) < 0) continue;
          const StateId t = g.step(s, a);
          if (!edge_ok(g, spec, s, t)) {
            return "permitted edge (" + std::to_string(s) + ", action " + std::to_string(a) +
                   ") violates the step constraint at depth " + std::to_string(layer);
          }
          next.push_back(t);
        }
        if (next.empty()) {
          return "system state " + std::to_string(s) + " is stuck at depth " +
                 std::to_string(layer);
        }
      } else {
        if (g.edges(s).empty()) {
          return "environment state " + std::to_string(s) + " is stuck at depth " +
                 std::to_string(layer);
        }
        for (const Game::Edge& e : g.edges(s)) {
          if (!edge_ok(g, spec, s, e.to)) {
            return "environment edge (" + std::to_string(s) + ", action " +
                   std::to_string(e.action) + ") violates the step constraint at depth " +
                   std::to_string(layer);
          }
          next.push_back(e.to);
        }
      }
      for (StateId t : next) {
        if (!seen[t]) {
          seen[t] = 1;
          next_frontier.push_back(t);
        }
      }
    }
    frontier = std::move(next_frontier);
  }
  return "";
}

std::string check_elimination_reasons(const Game& g, const SafetySpec& spec,
                                      const WinningRegion& region) {
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (region.contains(s)) {
      // Membership invariants.
      if (g.player(s) == Player::kSystem) {
        if (region.allowed[s].empty()) {
          return "winning system state " + std::to_string(s) + " has an empty allowed set";
        }
        for (ActionId a : region.allowed[s]) {
          const StateId t = g.step(s, a);
          if (!edge_ok(g, spec, s, t) || !region.contains(t)) {
            return "allowed action " + std::to_string(a) + " at state " + std::to_string(s) +
                   " leaves the region";
          }
        }
      } else {
        if (g.edges(s).empty()) {
          return "winning environment state " + std::to_string(s) + " is a dead end";
        }
        for (const Game::Edge& e : g.edges(s)) {
          if (!edge_ok(g, spec, s, e.to) || !region.contains(e.to)) {
            return "winning environment state " + std::to_string(s) +
                   " has an escaping edge (action " + std::to_string(e.action) + ")";
          }
        }
      }
      continue;
    }
    // Elimination reasons: re-adding s must break an invariant.
    if (g.player(s) == Player::kSystem) {
      for (const Game::Edge& e : g.edges(s)) {
        if (edge_ok(g, spec, s, e.to) && region.contains(e.to)) {
          return "eliminated system state " + std::to_string(s) +
                 " still has a safe move (action " + std::to_string(e.action) + ")";
        }
      }
    } else {
      bool reason = g.edges(s).empty();
      for (const Game::Edge& e : g.edges(s)) {
        if (!edge_ok(g, spec, s, e.to) || !region.contains(e.to)) reason = true;
      }
      if (!reason) {
        return "eliminated environment state " + std::to_string(s) +
               " has no escaping edge and is no dead end";
      }
    }
  }
  return "";
}

}  // namespace permrl
