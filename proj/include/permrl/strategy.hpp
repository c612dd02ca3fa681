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

#ifndef PERMRL_STRATEGY_HPP_
#define PERMRL_STRATEGY_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "permrl/game.hpp"

namespace permrl {

// Memoryless (positional) strategy for the system player: maps a state to the
// set of actions it permits there. An empty set means the strategy is
// undefined at that state. A deterministic strategy permits exactly one
// action wherever it is defined.
struct MemorylessStrategy {
  // Indexed by state id; each entry sorted ascending by action id.
  std::vector<std::vector<ActionId>> choice;

  static MemorylessStrategy empty(int num_states) {
    return MemorylessStrategy{std::vector<std::vector<ActionId>>(num_states)};
  }

  int num_states() const { return static_cast<int>(choice.size()); }
  bool defined(StateId s) const {
    return s >= 0 && s < num_states() && !choice[s].empty();
  }
  bool deterministic() const;
  bool permits(StateId s, ActionId a) const;
};

// Finite-memory strategy: a memory value from {0..memory_size-1} is carried
// along the run and rewritten on every arrival at a state, including after
// environment moves. The initial state is read with `initial_memory` (no
// update is applied on entry to the first state).
struct FiniteMemoryStrategy {
  int memory_size = 1;
  int initial_memory = 0;
  // Indexed by state * memory_size + memory. `act` is consulted only at
  // system states; `update` at every state.
  std::vector<std::vector<ActionId>> act;
  std::vector<int> update;

  int index(StateId s, int m) const { return static_cast<int>(s) * memory_size + m; }
};

// Product of a game with a finite-memory strategy's memory structure. The
// strategy component is memoryless on the product and induces exactly the
// runs of the original finite-memory strategy (projected to first
// components).
struct FoldResult {
  Game game;
  std::vector<StateId> origin_state;  // product id -> original state id
  std::vector<int> origin_memory;    // product id -> memory value
  MemorylessStrategy strategy;
};

FoldResult fold_memory(const Game& g, const FiniteMemoryStrategy& fms);

// Finite run prefix: states has one more entry than actions. rewards[i] is
// the instantaneous reward of (states[i], actions[i]) and is zero whenever
// movers[i] is the environment.
struct RunTrace {
  std::vector<StateId> states;
  std::vector<ActionId> actions;
  std::vector<double> rewards;
  std::vector<Player> movers;

  int length() const { return static_cast<int>(actions.size()); }
};

using RewardFn = std::function<double(StateId, ActionId)>;

// All run prefixes of exactly `depth` actions that start at `from`, follow
// `mu` at system states, and take every available action at environment
// states. Throws ModelError if any prefix gets stuck before reaching `depth`
// (a reachable state with no permitted action). Rewards are filled from
// `reward` when given, else zero; environment steps always carry zero.
std::vector<RunTrace> induced_runs(const Game& g, const MemorylessStrategy& mu, StateId from,
                                   int depth, const RewardFn& reward = nullptr);

// Whether mu1 permits every action mu2 permits, on every state reachable when
// the system plays within mu2 (and the environment plays arbitrarily), from
// all initial states. This is the inclusion preorder on strategies restricted
// to behaviour that can actually occur.
bool strategy_includes(const Game& g, const MemorylessStrategy& mu1,
                       const MemorylessStrategy& mu2);

}  // namespace permrl

#endif  // PERMRL_STRATEGY_HPP_
