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

#include <cmath>
#include <limits>
#include <vector>

#include "permrl/errors.hpp"
#include "permrl/game.hpp"
#include "permrl/gridworld.hpp"
#include "permrl/learn.hpp"
#include "permrl/restrict.hpp"
#include "permrl/safety.hpp"
#include "permrl/strategy.hpp"
#include "testutil.hpp"

using namespace permrl;

namespace {

// The N=3 pursuit envelope, the workhorse for learner checks.
struct Envelope {
  Game game;
  RewardFn reward;
};

Envelope pursuit_envelope() {
  const GridGame built = build_example1(GridConfig{});
  const MemorylessStrategy mu = maximally_permissive(built.game, built.spec);
  auto [ghat, map] = apply_strategy(built.game, mu);
  (void)map;
  Envelope env{std::move(ghat), nullptr};
  env.reward = diagonal_reward(env.game);
  return env;
}

double sup_q_diff(const Game& g, const QTable& a, const QTable& b) {
  double sup = 0.0;
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (size_t k = 0; k < a.q[s].size(); ++k) {
      sup = std::max(sup, std::fabs(a.q[s][k] - b.q[s][k]));
    }
  }
  return sup;
}

// Adversarial distance to the first rewarded system move: system minimizes,
// environment maximizes, counting system moves only. Independent of the value
// machinery; plain Bellman iteration on move counts.
std::vector<int> reward_distance(const Game& g, const RewardTable& r) {
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<int> k(g.num_states(), inf);
  for (int pass = 0; pass < g.num_states() + 2; ++pass) {
    bool changed = false;
    for (StateId s = 0; s < g.num_states(); ++s) {
      const auto edges = g.edges(s);
      int best;
      if (g.player(s) == Player::kSystem) {
        best = inf;
        for (size_t e = 0; e < edges.size(); ++e) {
          const int via = r.r[s][e] > 0.5 ? 0 : (k[edges[e].to] >= inf ? inf : 1 + k[edges[e].to]);
          best = std::min(best, via);
        }
      } else {
        best = 0;
        for (const Game::Edge& e : edges) best = std::max(best, k[e.to]);
      }
      if (best != k[s]) {
        k[s] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return k;
}

}  // namespace

TEST_CASE("gamma zero: value iteration returns the immediate rewards") {
  const Game g = Game::from_data(testutil::switch_game());
  RewardTable r = RewardTable::zeros(g);
  r.r[0] = {0.25, 0.75};
  r.r[1] = {0.5};
  const SweepResult res = maximin_value_iteration(g, r, 0.0);
  CHECK(res.q.q[0][0] == doctest::Approx(0.25));
  CHECK(res.q.q[0][1] == doctest::Approx(0.75));
  CHECK(res.q.q[1][0] == doctest::Approx(0.5));
  CHECK(res.v.v[0] == doctest::Approx(0.75));
}

TEST_CASE("self-loop earning 1 per move is worth 1/(1-gamma)") {
  GameData d;
  d.ap = {"p"};
  d.states = {{0, Player::kSystem, {0}}};
  d.initial = {0};
  d.actions = {{0, Player::kSystem, "loop"}};
  d.transitions = {{0, 0, 0}};
  const Game g = Game::from_data(d);
  RewardTable r = RewardTable::zeros(g);
  r.r[0] = {1.0};
  const SweepResult vi = maximin_value_iteration(g, r, 0.9);
  CHECK(vi.v.v[0] == doctest::Approx(10.0).epsilon(1e-9));

  LearnConfig cfg;
  cfg.seed = 3;
  const LearnResult learned = maximin_q_learn(g, [](StateId, ActionId) { return 1.0; }, cfg);
  CHECK(learned.log.converged);
  CHECK(learned.v.v[0] == doctest::Approx(10.0).epsilon(1e-3));
}

TEST_CASE("pursuit envelope values all sit on the gamma^k ladder") {
  const Envelope env = pursuit_envelope();
  const RewardTable r = RewardTable::from_fn(env.game, env.reward);
  const SweepResult vi = maximin_value_iteration(env.game, r, 0.9);
  const std::vector<int> k = reward_distance(env.game, r);
  int populated[4] = {0, 0, 0, 0};
  for (StateId s = 0; s < env.game.num_states(); ++s) {
    if (env.game.player(s) != Player::kSystem) continue;
    REQUIRE(k[s] >= 0);
    REQUIRE(k[s] <= 3);
    const double expect = std::pow(0.9, k[s]) / (1.0 - 0.9);
    REQUIRE(vi.v.v[s] == doctest::Approx(expect).epsilon(1e-10));
    populated[k[s]]++;
  }
  // The 3x3 envelope is cramped: a rewarded move is at most one unrewarded
  // move away, so exactly the first two rungs occur (56 and 16 states). The
  // deeper rungs appear from the 4x4 arena upward.
  CHECK(populated[0] == 56);
  CHECK(populated[1] == 16);
  CHECK(populated[2] == 0);
  CHECK(populated[3] == 0);
}

TEST_CASE("learned table matches value iteration in sup norm") {
  const Envelope env = pursuit_envelope();
  const RewardTable r = RewardTable::from_fn(env.game, env.reward);
  const SweepResult vi = maximin_value_iteration(env.game, r, 0.9);
  LearnConfig cfg;
  cfg.seed = 11;
  const LearnResult learned = maximin_q_learn(env.game, env.reward, cfg);
  CHECK(learned.log.converged);
  CHECK(sup_q_diff(env.game, learned.q, vi.q) < 1e-3);
}

TEST_CASE("learning is deterministic per seed") {
  const Envelope env = pursuit_envelope();
  LearnConfig cfg;
  cfg.seed = 5;
  cfg.max_iterations = 60000;
  cfg.threshold = 0.0;
  const LearnResult a = maximin_q_learn(env.game, env.reward, cfg);
  const LearnResult b = maximin_q_learn(env.game, env.reward, cfg);
  CHECK(sup_q_diff(env.game, a.q, b.q) == 0.0);
  REQUIRE(a.log.entries.size() == b.log.entries.size());
  for (size_t i = 0; i < a.log.entries.size(); ++i) {
    CHECK(a.log.entries[i].second == b.log.entries[i].second);
  }
  cfg.seed = 6;
  const LearnResult c = maximin_q_learn(env.game, env.reward, cfg);
  CHECK(sup_q_diff(env.game, a.q, c.q) > 0.0);
}

TEST_CASE("reward scaling scales the fixed point linearly") {
  const Game g = Game::from_data(testutil::line_chase(3));
  RewardTable r = RewardTable::zeros(g);
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.player(s) != Player::kSystem) continue;
    const auto edges = g.edges(s);
    for (size_t e = 0; e < edges.size(); ++e) {
      r.r[s][e] = g.has_label(edges[e].to, 0) ? 1.0 : 0.0;  // p0 holds after the move
    }
  }
  RewardTable r5 = r;
  for (auto& row : r5.r) {
    for (double& x : row) x *= 5.0;
  }
  const SweepResult a = maximin_value_iteration(g, r, 0.9);
  const SweepResult b = maximin_value_iteration(g, r5, 0.9);
  for (StateId s = 0; s < g.num_states(); ++s) {
    CHECK(b.v.v[s] == doctest::Approx(5.0 * a.v.v[s]).epsilon(1e-9));
  }
}

TEST_CASE("learned values stay inside [0, max_reward/(1-gamma)]") {
  const Envelope env = pursuit_envelope();
  LearnConfig cfg;
  cfg.seed = 2;
  const LearnResult res = maximin_q_learn(env.game, env.reward, cfg);
  for (StateId s = 0; s < env.game.num_states(); ++s) {
    for (double q : res.q.q[s]) {
      CHECK(q >= 0.0);
      CHECK(q <= 10.0 + 1e-9);
    }
  }
}

TEST_CASE("convergence log marks window boundaries and decreases") {
  const Envelope env = pursuit_envelope();
  LearnConfig cfg;
  cfg.seed = 7;
  const LearnResult res = maximin_q_learn(env.game, env.reward, cfg);
  REQUIRE(!res.log.entries.empty());
  for (size_t i = 0; i < res.log.entries.size(); ++i) {
    CHECK(res.log.entries[i].first == static_cast<std::int64_t>(i + 1) * cfg.window);
  }
  // Late windows are much calmer than early ones.
  const double early = res.log.entries.front().second;
  const double late = res.log.entries.back().second;
  CHECK(late < early / 100.0);
}

TEST_CASE("greedy strategy breaks ties toward the lowest action id") {
  const Game g = Game::from_data(testutil::switch_game());
  QTable q = QTable::zeros(g, 0.9);
  q.q[0] = {1.0, 1.0};  // tie between a0 and a1
  q.q[1] = {0.0};
  MemorylessStrategy mu = greedy_strategy(g, q);
  CHECK(mu.choice[0] == std::vector<ActionId>{0});
  q.q[0] = {1.0, 1.0 + 1e-12};
  mu = greedy_strategy(g, q);
  CHECK(mu.choice[0] == std::vector<ActionId>{1});
}

TEST_CASE("worst case reward on a hand-solved chain") {
  // A -go-> B (reward 1), B -loop-> B (reward 0).
  GameData d;
  d.ap = {"p"};
  d.states = {{0, Player::kSystem, {}}, {1, Player::kSystem, {0}}};
  d.initial = {0};
  d.actions = {{0, Player::kSystem, "go"}, {1, Player::kSystem, "loop"}};
  d.transitions = {{0, 0, 1}, {1, 1, 1}};
  const Game g = Game::from_data(d);
  RewardTable r = RewardTable::zeros(g);
  r.r[0] = {1.0};
  r.r[1] = {0.0};
  MemorylessStrategy mu = MemorylessStrategy::empty(2);
  mu.choice[0] = {0};
  mu.choice[1] = {1};
  const RewardBounds b = worst_case_reward(g, mu, r, 0, 0.9, 12);
  CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(1.0 + std::pow(0.9, 12) * 10.0).epsilon(1e-9));
  CHECK(b.lower <= b.upper);
}

TEST_CASE("environment stall pins the continuation at zero") {
  // S -a-> E earning 1; E only loops to itself, so the system never moves
  // again and the total reward is exactly the first move's 1.
  GameData d;
  d.ap = {"p"};
  d.states = {{0, Player::kSystem, {}}, {1, Player::kEnvironment, {}}};
  d.initial = {0};
  d.actions = {{0, Player::kSystem, "a"}, {1, Player::kEnvironment, "u"}};
  d.transitions = {{0, 0, 1}, {1, 1, 1}};
  const Game g = Game::from_data(d);
  RewardTable r = RewardTable::zeros(g);
  r.r[0] = {1.0};
  MemorylessStrategy mu = MemorylessStrategy::empty(2);
  mu.choice[0] = {0};
  const RewardBounds b = worst_case_reward(g, mu, r, 0, 0.9, 12);
  CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("worst case bounds match exhaustive rollouts on an alternating game") {
  const Game g = Game::from_data(testutil::line_chase(3));
  // Reward: the system piece sits on cell 0 after its move.
  const RewardFn fn = [&g](StateId s, ActionId a) {
    return g.has_label(g.step(s, a), 0) ? 1.0 : 0.0;
  };
  const RewardTable table = RewardTable::from_fn(g, fn);
  const double gamma = 0.9;
  for (int variant = 0; variant < 3; ++variant) {
    MemorylessStrategy mu = MemorylessStrategy::empty(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (g.player(s) != Player::kSystem) continue;
      const auto avail = g.available(s);
      mu.choice[s] = {avail[variant % avail.size()]};
    }
    for (const int horizon : {1, 2, 3, 4}) {
      for (StateId start : g.initial()) {
        // Strict alternation: depth 2h covers exactly h system moves from a
        // system state.
        const auto runs = induced_runs(g, mu, start, 2 * horizon, fn);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& run : runs) {
          worst = std::min(worst, discounted_reward(run, gamma));
        }
        const RewardBounds b = worst_case_reward(g, mu, table, start, gamma, horizon);
        CAPTURE(variant);
        CAPTURE(horizon);
        CAPTURE(start);
        REQUIRE(b.lower == doctest::Approx(worst).epsilon(1e-9));
        REQUIRE(b.upper >= worst - 1e-12);
      }
    }
  }
}

TEST_CASE("greedy strategy's worst case approaches the learned value") {
  const Envelope env = pursuit_envelope();
  const RewardTable r = RewardTable::from_fn(env.game, env.reward);
  LearnConfig cfg;
  cfg.seed = 13;
  const LearnResult learned = maximin_q_learn(env.game, env.reward, cfg);
  const MemorylessStrategy greedy = greedy_strategy(env.game, learned.q);
  const int horizon = 12;
  const double tail = std::pow(0.9, horizon) * r.max_abs() / (1.0 - 0.9);
  for (StateId s = 0; s < env.game.num_states(); ++s) {
    if (env.game.player(s) != Player::kSystem) continue;
    const RewardBounds b = worst_case_reward(env.game, greedy, r, s, 0.9, horizon);
    // V*(s) lies within the rollout's tail tolerance of the bound.
    CAPTURE(s);
    REQUIRE(learned.v.v[s] >= b.lower - 2e-3);
    REQUIRE(learned.v.v[s] <= b.lower + tail + 2e-3);
  }
}

TEST_CASE("horizon zero yields the trivial bounds") {
  const Game g = Game::from_data(testutil::switch_game());
  RewardTable r = RewardTable::zeros(g);
  r.r[0] = {1.0, 0.0};
  r.r[1] = {0.0};
  MemorylessStrategy mu = MemorylessStrategy::empty(2);
  mu.choice[0] = {0};
  mu.choice[1] = {2};
  const RewardBounds b = worst_case_reward(g, mu, r, 0, 0.9, 0);
  CHECK(b.lower == doctest::Approx(0.0));
  CHECK(b.upper == doctest::Approx(10.0));
}

TEST_CASE("config validation rejects broken setups") {
  const Game g = Game::from_data(testutil::switch_game());
  const RewardFn fn = [](StateId, ActionId) { return 0.0; };
  LearnConfig cfg;
  SUBCASE("gamma out of range") {
    cfg.gamma = 1.0;
    CHECK_THROWS_AS(maximin_q_learn(g, fn, cfg), ModelError);
  }
  SUBCASE("alpha exponent breaks square summability") {
    cfg.alpha_exponent = 0.5;
    CHECK_THROWS_AS(maximin_q_learn(g, fn, cfg), ModelError);
  }
  SUBCASE("missing reward") {
    CHECK_THROWS_AS(maximin_q_learn(g, nullptr, cfg), ModelError);
  }
  SUBCASE("dead ends rejected") {
    GameData d = testutil::switch_game();
    d.transitions.pop_back();
    const Game broken = Game::from_data(d);
    CHECK_THROWS_AS(maximin_q_learn(broken, fn, cfg), ModelError);
  }
}

TEST_CASE("value iteration reports sweep counts and respects tolerance") {
  const Envelope env = pursuit_envelope();
  const RewardTable r = RewardTable::from_fn(env.game, env.reward);
  const SweepResult fine = maximin_value_iteration(env.game, r, 0.9, 1e-12);
  const SweepResult coarse = maximin_value_iteration(env.game, r, 0.9, 1e-3);
  CHECK(coarse.sweeps < fine.sweeps);
  CHECK(sup_q_diff(env.game, fine.q, coarse.q) < 1e-2);
}
