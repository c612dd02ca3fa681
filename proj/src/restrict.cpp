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

#include "permrl/restrict.hpp"

#include <string>

#include "permrl/errors.hpp"
#include "permrl/log.hpp"

namespace permrl {

std::pair<Game, StateMap> apply_strategy(const Game& g, const MemorylessStrategy& mu) {
  GameData data = g.to_data();
  data.transitions.clear();
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (const Game::Edge& e : g.edges(s)) {
      if (g.player(s) == Player::kSystem && !mu.permits(s, e.action)) continue;
      data.transitions.push_back({s, e.action, e.to});
    }
  }

  BuildReport report;
  Game restricted = Game::from_data(data, &report);
  if (!report.dead_ends.empty()) {
    const StateId bad = report.dead_ends.front();
    throw ModelError("apply_strategy: reachable state " +
                     std::to_string(report.kept_to_original[bad]) + " (" +
                     to_string(restricted.player(bad)) +
                     ") is left with no outgoing move; the strategy is not winning");
  }
  log::info("restricted game keeps " + std::to_string(restricted.num_states()) + " of " +
            std::to_string(g.num_states()) + " states");
  StateMap map;
  map.to_original = report.kept_to_original;
  return {std::move(restricted), std::move(map)};
}

MemorylessStrategy lift_strategy(const StateMap& map, const MemorylessStrategy& mu_restricted,
                                 int num_original_states) {
  if (map.num_states() != mu_restricted.num_states()) {
    throw ModelError("lift_strategy: strategy and state map describe different games");
  }
  MemorylessStrategy out = MemorylessStrategy::empty(num_original_states);
  for (StateId s = 0; s < map.num_states(); ++s) {
    const StateId orig = map.to_original[s];
    if (orig < 0 || orig >= num_original_states) {
      throw ModelError("lift_strategy: state map points outside the original game");
    }
    out.choice[orig] = mu_restricted.choice[s];
  }
  return out;
}

}  // namespace permrl
