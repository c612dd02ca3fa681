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

#include <string>
#include <vector>

#include "permrl/errors.hpp"
#include "permrl/formula.hpp"
#include "permrl/game.hpp"
#include "permrl/gridworld.hpp"
#include "permrl/safety.hpp"
#include "permrl/verify.hpp"
#include "testutil.hpp"

using namespace permrl;

namespace {

void check_same_region(const Game& g, const WinningRegion& fast, const WinningRegion& naive) {
  for (StateId s = 0; s < g.num_states(); ++s) {
    CAPTURE(s);
    REQUIRE(fast.contains(s) == naive.contains(s));
    if (fast.contains(s) && g.player(s) == Player::kSystem) {
      REQUIRE(fast.allowed[s] == naive.allowed[s]);
    }
  }
}

}  // namespace

TEST_CASE("trivially safe invariant keeps every dead-end-free state") {
  const Game g = Game::from_data(testutil::line_chase(3));
  SafetySpec spec;
  spec.initial = Assertion::make_true();
  spec.invariant = Assertion::make_true();
  const WinningRegion region = solve_safety(g, spec);
  for (StateId s = 0; s < g.num_states(); ++s) {
    CHECK(region.contains(s));
    if (g.player(s) == Player::kSystem) CHECK(region.allowed[s] == g.available(s));
  }
}

TEST_CASE("two-cell line is unrealizable when the chaser starts adjacent") {
  // One-dimensional chase on two cells: the environment piece can always
  // step onto the system piece, so "never share a cell" is hopeless.
  const Game g = Game::from_data(testutil::line_chase(2));
  const std::vector<std::string>& ap = g.ap();
  SafetySpec spec;
  spec.initial = Assertion::make_true();
  // p0 & e0 -> false, p1 & e1 -> false.
  spec.invariant = Assertion::implies(Assertion::var(0) && Assertion::var(2),
                                      Assertion::make_false()) &&
                   Assertion::implies(Assertion::var(1) && Assertion::var(3),
                                      Assertion::make_false());
  REQUIRE(ap[0] == "p0");
  REQUIRE(ap[2] == "e0");
  const WinningRegion region = solve_safety(g, spec);
  for (StateId s : g.initial()) CHECK_FALSE(region.contains(s));
  CHECK_THROWS_AS(maximally_permissive(g, spec), UnrealizableError);
}

TEST_CASE("grid pursuit: solver matches the naive oracle") {
  for (int n = 2; n <= 3; ++n) {
    GridConfig cfg;
    cfg.n = n;
    const GridGame built = build_example1(cfg);
    const WinningRegion fast = solve_safety(built.game, built.spec);
    const WinningRegion naive = naive_winning_region(built.game, built.spec);
    check_same_region(built.game, fast, naive);
    CHECK(check_elimination_reasons(built.game, built.spec, fast) == "");
  }
}

TEST_CASE("random games: solver matches the naive oracle") {
  int nonempty = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    testutil::RandomGameParams pr;
    pr.system_states = 3 + static_cast<int>(seed % 4);
    pr.env_states = 3 + static_cast<int>((seed / 4) % 3);
    pr.allow_dead_ends = seed % 5 == 0;
    GameData data = testutil::random_game(seed * 7919 + 1, pr);
    Game g;
    try {
      g = Game::from_data(data);
    } catch (const ModelError&) {
      continue;  // generator may produce an unreachable-everything game
    }
    const SafetySpec spec = testutil::random_spec(seed * 104729 + 3, g.num_ap());
    const WinningRegion fast = solve_safety(g, spec);
    const WinningRegion naive = naive_winning_region(g, spec);
    CAPTURE(seed);
    check_same_region(g, fast, naive);
    CHECK(check_elimination_reasons(g, spec, fast) == "");
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (fast.contains(s)) {
        nonempty++;
        break;
      }
    }
  }
  // The generator must exercise non-trivial regions, not just empty ones.
  CHECK(nonempty > 20);
}

TEST_CASE("allowed sets keep exactly the invariant-respecting edges into the region") {
  const GridGame built = build_example1(GridConfig{});
  const Game& g = built.game;
  const WinningRegion region = solve_safety(g, built.spec);
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (!region.contains(s) || g.player(s) != Player::kSystem) continue;
    std::vector<ActionId> expect;
    for (const Game::Edge& e : g.edges(s)) {
      if (!region.contains(e.to)) continue;
      if (!built.spec.invariant.eval(g.label_bits(s), g.label_bits(e.to))) continue;
      expect.push_back(e.action);
    }
    REQUIRE(region.allowed[s] == expect);
    CHECK_FALSE(expect.empty());
  }
}

TEST_CASE("edge operation count is linear in the transition count") {
  for (int n = 2; n <= 5; ++n) {
    GridConfig cfg;
    cfg.n = n;
    const GridGame built = build_example1(cfg);
    const WinningRegion region = solve_safety(built.game, built.spec);
    CHECK(region.edge_operations <= 3 * static_cast<std::int64_t>(built.game.num_transitions()));
  }
}

TEST_CASE("maximally_permissive rejects initial states that violate phi0") {
  const Game g = Game::from_data(testutil::switch_game());
  SafetySpec spec;
  spec.initial = Assertion::var(1);  // b2 does not hold in state 0
  spec.invariant = Assertion::make_true();
  try {
    maximally_permissive(g, spec);
    FAIL("expected UnrealizableError");
  } catch (const UnrealizableError& e) {
    CHECK(std::string(e.what()).find("state constraint") != std::string::npos);
  }
}

TEST_CASE("maximally_permissive covers every winning system state") {
  const GridGame built = build_example1(GridConfig{});
  WinningRegion region;
  const MemorylessStrategy mu = maximally_permissive(built.game, built.spec, &region);
  for (StateId s = 0; s < built.game.num_states(); ++s) {
    if (built.game.player(s) != Player::kSystem) continue;
    if (region.contains(s)) {
      CHECK(mu.choice[s] == region.allowed[s]);
      CHECK_FALSE(mu.choice[s].empty());
    } else {
      CHECK(mu.choice[s].empty());
    }
  }
}

TEST_CASE("spec validation rejects misuse") {
  const Game g = Game::from_data(testutil::switch_game());
  SafetySpec spec;
  SUBCASE("missing pieces") {
    CHECK_THROWS_AS(solve_safety(g, spec), ModelError);
  }
  SUBCASE("next-step atom in the initial constraint") {
    spec.initial = Assertion::next_var(0);
    spec.invariant = Assertion::make_true();
    CHECK_THROWS_AS(solve_safety(g, spec), ModelError);
  }
  SUBCASE("proposition outside the table") {
    spec.initial = Assertion::make_true();
    spec.invariant = Assertion::var(5);
    CHECK_THROWS_AS(solve_safety(g, spec), ModelError);
  }
}

TEST_CASE("next-step constraints prune edges, not just states") {
  // Two system states with labels {a} and {}; invariant "X a" forbids every
  // edge into the unlabeled state.
  GameData d;
  d.ap = {"a"};
  d.states = {{0, Player::kSystem, {0}}, {1, Player::kSystem, {}}};
  d.initial = {0};
  d.actions = {{0, Player::kSystem, "stay"}, {1, Player::kSystem, "go"}};
  d.transitions = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}};
  const Game g = Game::from_data(d);
  SafetySpec spec;
  spec.initial = Assertion::make_true();
  spec.invariant = Assertion::next_var(0);
  const WinningRegion region = solve_safety(g, spec);
  CHECK(region.contains(0));
  CHECK_FALSE(region.contains(1));
  CHECK(region.allowed[0] == std::vector<ActionId>{0});
}

TEST_CASE("dead ends lose even with a trivial invariant") {
  GameData d = testutil::switch_game();
  d.transitions.pop_back();  // state 1 becomes a dead end
  const Game g = Game::from_data(d);
  SafetySpec spec;
  spec.initial = Assertion::make_true();
  spec.invariant = Assertion::make_true();
  const WinningRegion region = solve_safety(g, spec);
  CHECK(region.contains(0));
  CHECK_FALSE(region.contains(1));
  // Only the self-loop remains at state 0.
  CHECK(region.allowed[0] == std::vector<ActionId>{0});
}
