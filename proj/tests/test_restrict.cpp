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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "permrl/errors.hpp"
#include "permrl/game.hpp"
#include "permrl/gridworld.hpp"
#include "permrl/restrict.hpp"
#include "permrl/safety.hpp"
#include "permrl/strategy.hpp"
#include "permrl/verify.hpp"
#include "testutil.hpp"

using namespace permrl;

namespace {

MemorylessStrategy permissive_for_grid(const Game& g, const SafetySpec& spec) {
  return maximally_permissive(g, spec);
}

}  // namespace

TEST_CASE("restricting to an allow-everything strategy is the identity") {
  const Game g = Game::from_data(testutil::line_chase(3));
  MemorylessStrategy mu = MemorylessStrategy::empty(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.player(s) == Player::kSystem) mu.choice[s] = g.available(s);
  }
  const auto [ghat, map] = apply_strategy(g, mu);
  CHECK(ghat.num_states() == g.num_states());
  CHECK(ghat.num_transitions() == g.num_transitions());
  for (StateId s = 0; s < ghat.num_states(); ++s) {
    CHECK(map.to_original[s] == s);  // line_chase is fully reachable
    CHECK(ghat.player(s) == g.player(map.to_original[s]));
  }
}

TEST_CASE("restricted pursuit games match the published sizes") {
  const struct {
    int n;
    int states;
    int system_states;
  } expected[] = {{3, 120, 72}, {4, 432, 240}};
  for (const auto& row : expected) {
    GridConfig cfg;
    cfg.n = row.n;
    const GridGame built = build_example1(cfg);
    const MemorylessStrategy mu = permissive_for_grid(built.game, built.spec);
    const auto [ghat, map] = apply_strategy(built.game, mu);
    CAPTURE(row.n);
    CHECK(ghat.num_states() == row.states);
    CHECK(ghat.num_system_states() == row.system_states);
    CHECK(map.num_states() == ghat.num_states());
  }
}

TEST_CASE("environment edges survive restriction untouched") {
  const GridGame built = build_example1(GridConfig{});
  const MemorylessStrategy mu = permissive_for_grid(built.game, built.spec);
  const auto [ghat, map] = apply_strategy(built.game, mu);
  for (StateId s = 0; s < ghat.num_states(); ++s) {
    if (ghat.player(s) != Player::kEnvironment) continue;
    // Every original environment edge must still be present (its target is
    // winning, hence kept, because the region is environment-closed).
    const StateId orig = map.to_original[s];
    CHECK(ghat.edges(s).size() == built.game.edges(orig).size());
  }
}

TEST_CASE("run sets of the restriction agree with mu-induced runs") {
  const GridGame built = build_example1(GridConfig{});
  const Game& g = built.game;
  const MemorylessStrategy mu = permissive_for_grid(g, built.spec);
  const auto [ghat, map] = apply_strategy(g, mu);

  // Inverse map original -> restricted.
  std::vector<StateId> inv(g.num_states(), -1);
  for (StateId s = 0; s < ghat.num_states(); ++s) inv[map.to_original[s]] = s;

  // Full strategy on the restriction: everything that remains is allowed.
  MemorylessStrategy all = MemorylessStrategy::empty(ghat.num_states());
  for (StateId s = 0; s < ghat.num_states(); ++s) {
    if (ghat.player(s) == Player::kSystem) all.choice[s] = ghat.available(s);
  }

  int compared = 0;
  for (StateId start : ghat.initial()) {
    if (compared >= 3) break;  // depth-8 trees are large; a few starts suffice
    compared++;
    const auto runs_hat = induced_runs(ghat, all, start, 8);
    const auto runs_g = induced_runs(g, mu, map.to_original[start], 8);
    REQUIRE(runs_hat.size() == runs_g.size());
    // Compare as sets of (original-state, action) sequences.
    std::set<std::vector<int>> set_hat, set_g;
    for (const auto& r : runs_hat) {
      std::vector<int> key;
      for (size_t i = 0; i < r.actions.size(); ++i) {
        key.push_back(map.to_original[r.states[i]]);
        key.push_back(r.actions[i]);
      }
      set_hat.insert(key);
    }
    for (const auto& r : runs_g) {
      std::vector<int> key;
      for (size_t i = 0; i < r.actions.size(); ++i) {
        key.push_back(r.states[i]);
        key.push_back(r.actions[i]);
      }
      set_g.insert(key);
    }
    REQUIRE(set_hat == set_g);
  }
}

TEST_CASE("apply_strategy rejects non-winning strategies") {
  // A strategy that steers into a dead end: switch to state 1 whose only
  // action is removed.
  const Game g = Game::from_data(testutil::switch_game());
  MemorylessStrategy mu = MemorylessStrategy::empty(g.num_states());
  mu.choice[0] = {1};  // go to state 1
  mu.choice[1] = {};   // nothing allowed there
  CHECK_THROWS_AS(apply_strategy(g, mu), ModelError);
}

TEST_CASE("lift_strategy maps choices back to original ids") {
  const GridGame built = build_example1(GridConfig{});
  const Game& g = built.game;
  const MemorylessStrategy mu = permissive_for_grid(g, built.spec);
  const auto [ghat, map] = apply_strategy(g, mu);

  MemorylessStrategy sub = MemorylessStrategy::empty(ghat.num_states());
  for (StateId s = 0; s < ghat.num_states(); ++s) {
    if (ghat.player(s) == Player::kSystem) {
      sub.choice[s] = {ghat.available(s).front()};
    }
  }
  const MemorylessStrategy lifted = lift_strategy(map, sub, g.num_states());
  REQUIRE(lifted.num_states() == g.num_states());
  int defined = 0;
  for (StateId s = 0; s < ghat.num_states(); ++s) {
    if (ghat.player(s) != Player::kSystem) continue;
    defined++;
    CHECK(lifted.choice[map.to_original[s]] == sub.choice[s]);
  }
  CHECK(defined == ghat.num_system_states());
  // States outside the restriction stay undefined.
  std::set<StateId> kept(map.to_original.begin(), map.to_original.end());
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (kept.count(s) == 0) CHECK_FALSE(lifted.defined(s));
  }
  // The lifted strategy is itself winning on the original game.
  CHECK(is_winning_strategy(g, built.spec, lifted));
}

TEST_CASE("every strategy of the restricted game wins the original") {
  // Deterministic spot check: pick three different one-action-per-state
  // strategies on the restriction, lift them, and verify each wins.
  const GridGame built = build_example1(GridConfig{});
  const Game& g = built.game;
  const MemorylessStrategy mu = permissive_for_grid(g, built.spec);
  const auto [ghat, map] = apply_strategy(g, mu);
  for (int variant = 0; variant < 3; ++variant) {
    MemorylessStrategy pick = MemorylessStrategy::empty(ghat.num_states());
    for (StateId s = 0; s < ghat.num_states(); ++s) {
      if (ghat.player(s) != Player::kSystem) continue;
      const auto avail = ghat.available(s);
      pick.choice[s] = {avail[std::min<size_t>(variant, avail.size() - 1)]};
    }
    const MemorylessStrategy lifted = lift_strategy(map, pick, g.num_states());
    CAPTURE(variant);
    CHECK(is_winning_strategy(g, built.spec, lifted));
  }
}

TEST_CASE("lift_strategy validates sizes") {
  StateMap map;
  map.to_original = {0, 2};
  MemorylessStrategy mu = MemorylessStrategy::empty(3);  // wrong: 3 != 2
  CHECK_THROWS_AS(lift_strategy(map, mu, 5), ModelError);
}
