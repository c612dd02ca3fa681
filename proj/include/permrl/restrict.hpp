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

#ifndef PERMRL_RESTRICT_HPP_
#define PERMRL_RESTRICT_HPP_

#include <utility>
#include <vector>

#include "permrl/game.hpp"
#include "permrl/strategy.hpp"

namespace permrl {

// Bijection between the states of a restricted game and the states of the
// game it was carved out of.
struct StateMap {
  std::vector<StateId> to_original;  // restricted id -> original id

  int num_states() const { return static_cast<int>(to_original.size()); }
};

// Restricts `g` to the moves `mu` permits: system edges outside mu are
// dropped, environment edges are kept, states that become unreachable from
// the initial set are pruned. The action table and proposition table carry
// over unchanged, so action ids and label indices mean the same thing in both
// games. Throws ModelError if the restriction leaves a reachable state with
// no outgoing move (mu was not closed under its own play).
std::pair<Game, StateMap> apply_strategy(const Game& g, const MemorylessStrategy& mu);

// Transfers a strategy on the restricted game back to the original game's
// state space. States outside the restriction get an empty (undefined) set.
MemorylessStrategy lift_strategy(const StateMap& map, const MemorylessStrategy& mu_restricted,
                                 int num_original_states);

}  // namespace permrl

#endif  // PERMRL_RESTRICT_HPP_
