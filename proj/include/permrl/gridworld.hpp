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

#ifndef PERMRL_GRIDWORLD_HPP_
#define PERMRL_GRIDWORLD_HPP_

#include <optional>
#include <string>
#include <utility>

#include "permrl/game.hpp"
#include "permrl/safety.hpp"
#include "permrl/strategy.hpp"

namespace permrl {

// Two robots on an n-by-n grid, moving in alternation. The environment robot
// must move to one of its 4-neighbour cells each turn; the system robot may
// also stay put. Cells are indexed row-major, cell = row * n + col, with row
// 0 at the bottom: "up" increases the row, "right" increases the column.
//
// A game state is (environment cell, system cell, turn); propositions x_<c>,
// y_<c>, and t_0 / t_1 expose them, with t_1 marking the system's turn. The
// environment robot sits at x, the system robot at y.
struct GridConfig {
  int n = 3;  // side length, at least 2

  // When unset, every non-collision state with the configured first mover to
  // move is initial; when both are set, the single matching state is.
  std::optional<int> system_start;
  std::optional<int> env_start;
  Player first_mover = Player::kSystem;

  // Cells the recurring-visit objective asks the system to return to;
  // defaults to the upper-left and lower-right corners (n*n - n and n - 1).
  std::optional<std::pair<int, int>> liveness_targets;
  // Bound for the counter reduction: the system must reach a target cell at
  // least every counter_max of its own moves. Required by build_example3.
  std::optional<int> counter_max;
};

struct GridGame {
  Game game;
  SafetySpec spec;
};

// Collision avoidance only: the safety objective forbids the robots from
// occupying the same cell, now and after every step.
GridGame build_example1(const GridConfig& cfg);

// Collision avoidance plus recurring visits to the two target cells, reduced
// to safety with a bounded counter (see counter_augment). The returned spec
// is the collision invariant re-indexed over the augmented game; the counter
// bound is already baked into the game's transitions.
struct GridGame3 {
  Game game;
  SafetySpec spec;
  AugmentResult augment;  // mapping back to the collision-avoidance game
};

GridGame3 build_example3(const GridConfig& cfg);

// Richer objective (reach a home cell whenever the environment keeps
// revisiting its own target), written in full LTL. It lies outside the
// fragment this library solves; the builder emits the game plus the
// objective's textual form for documentation and external-tool interop.
struct GridGame2 {
  Game game;
  std::string ltl;
};

GridGame2 build_example2(const GridConfig& cfg);

// Reward 1 for a system move that lands the system robot diagonally adjacent
// to the environment robot, else 0. Positions are read from the x_/y_ labels
// of the successor state, so the same oracle works on restricted and
// counter-augmented variants of the grid games.
RewardFn diagonal_reward(const Game& g);

}  // namespace permrl

#endif  // PERMRL_GRIDWORLD_HPP_
