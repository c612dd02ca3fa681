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

#ifndef PERMRL_SAFETY_HPP_
#define PERMRL_SAFETY_HPP_

#include <cstdint>
#include <vector>

#include "permrl/formula.hpp"
#include "permrl/game.hpp"
#include "permrl/strategy.hpp"

namespace permrl {

// Safety objective: `initial` must hold in every initial state, and
// `invariant` must hold across every step of every run. `initial` is over
// current-state atoms only; `invariant` may also use next-step atoms.
struct SafetySpec {
  Assertion initial;    // state constraint
  Assertion invariant;  // step constraint, checked on every edge taken
};

// Greatest set of states from which the system can force the invariant to
// hold forever, together with the per-state action sets that stay inside it.
struct WinningRegion {
  std::vector<char> member;                    // indexed by state id
  std::vector<std::vector<ActionId>> allowed;  // nonempty exactly on winning system states
  std::int64_t edge_operations = 0;            // work counter; bounded by 4 * |transitions|

  bool contains(StateId s) const { return member[s] != 0; }
};

// Computes the winning region for the invariant part of `spec` by backward
// edge elimination:
//   * an edge violating the invariant is deleted (for the system it is just
//     unavailable; for the environment its mere existence loses the state,
//     since the environment may take it),
//   * a system state dies when its surviving actions run out,
//   * an environment state dies when any surviving action leads to a dead
//     state, or when it has no actions at all,
// iterated to the greatest fixed point. Runs in time linear in the number of
// transitions; `edge_operations` counts edge visits.
WinningRegion solve_safety(const Game& g, const SafetySpec& spec);

// The maximally permissive memoryless strategy for `spec`: at every winning
// system state it permits exactly the actions that keep the run winning, so
// it includes every winning strategy. Throws UnrealizableError if some
// initial state fails the state constraint or falls outside the winning
// region (the error names the first such state).
MemorylessStrategy maximally_permissive(const Game& g, const SafetySpec& spec,
                                        WinningRegion* region_out = nullptr);

// Product of a game with a bounded counter, used to reduce "the system
// re-establishes `reset_predicate` at least every `counter_max` of its own
// moves" to a pure safety objective. The counter starts at 0, resets to 0 on
// a system move whose successor satisfies `reset_predicate` (over the
// original labels), increments otherwise, and is frozen across environment
// moves. Transitions that would drive it to `counter_max` are deleted.
struct CounterAugmentation {
  Assertion reset_predicate;  // over the original game's propositions
  int counter_max = 1;
};

// Result of the counter product. The augmented game adds one fresh
// proposition "cnt_<k>" per counter value; each product state is labeled with
// the original labels plus its counter value. Unreachable product states are
// pruned.
struct AugmentResult {
  Game game;
  std::vector<StateId> origin_state;  // augmented id -> original state id
  std::vector<int> counter;           // augmented id -> counter value
};

AugmentResult counter_augment(const Game& g, const CounterAugmentation& aug);

}  // namespace permrl

#endif  // PERMRL_SAFETY_HPP_
