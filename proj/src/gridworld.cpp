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

#include "permrl/gridworld.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "permrl/errors.hpp"

namespace permrl {

namespace {

// Cells are row-major with row 0 at the bottom: up = +n, down = -n,
// left = -1, right = +1, guarded against the grid edges.
struct Grid {
  int n;

  int cells() const { return n * n; }
  int row(int cell) const { return cell / n; }
  int col(int cell) const { return cell % n; }

  // Returns the moved-to cell or -1 when the move leaves the grid.
  int move(int cell, int dr, int dc) const {
    const int r = row(cell) + dr;
    const int c = col(cell) + dc;
    if (r < 0 || r >= n || c < 0 || c >= n) return -1;
    return r * n + c;
  }
};

struct Move {
  const char* name;
  int dr;
  int dc;
};

// Action ids are fixed: 0..4 system (up/down/left/right/stay), 5..8
// environment (up/down/left/right; the environment may not stay).
constexpr Move kSystemMoves[] = {
    {"up_s", 1, 0}, {"down_s", -1, 0}, {"left_s", 0, -1}, {"right_s", 0, 1}, {"stay_s", 0, 0}};
constexpr Move kEnvMoves[] = {
    {"up_e", 1, 0}, {"down_e", -1, 0}, {"left_e", 0, -1}, {"right_e", 0, 1}};

void check_config(const GridConfig& cfg) {
  if (cfg.n < 2) throw ModelError("grid side length must be at least 2");
  const int cells = cfg.n * cfg.n;
  if (cfg.system_start.has_value() != cfg.env_start.has_value()) {
    throw ModelError("grid start cells must be given for both robots or neither");
  }
  if (cfg.system_start) {
    if (*cfg.system_start < 0 || *cfg.system_start >= cells || *cfg.env_start < 0 ||
        *cfg.env_start >= cells) {
      throw ModelError("grid start cell out of range");
    }
    if (*cfg.system_start == *cfg.env_start) {
      throw ModelError("the two robots must start in different cells");
    }
  }
  if (cfg.liveness_targets) {
    const auto [a, b] = *cfg.liveness_targets;
    if (a < 0 || a >= cells || b < 0 || b >= cells) {
      throw ModelError("liveness target cell out of range");
    }
  }
}

}  // namespace

GridGame build_example1(const GridConfig& cfg) {
  check_config(cfg);
  const Grid grid{cfg.n};
  const int cells = grid.cells();

  GameData data;
  for (int c = 0; c < cells; ++c) data.ap.push_back("x" + std::to_string(c));
  for (int c = 0; c < cells; ++c) data.ap.push_back("y" + std::to_string(c));
  data.ap.push_back("t0");
  data.ap.push_back("t1");
  const int y_base = cells;
  const int t_base = 2 * cells;

  ActionId next_action = 0;
  for (const Move& m : kSystemMoves) {
    data.actions.push_back({next_action++, Player::kSystem, m.name});
  }
  for (const Move& m : kEnvMoves) {
    data.actions.push_back({next_action++, Player::kEnvironment, m.name});
  }

  // State id = (x * cells + y) * 2 + turn, turn 1 = system to move.
  const auto state_id = [cells](int x, int y, int turn) { return (x * cells + y) * 2 + turn; };
  for (int x = 0; x < cells; ++x) {
    for (int y = 0; y < cells; ++y) {
      for (int turn = 0; turn < 2; ++turn) {
        GameData::State st;
        st.id = state_id(x, y, turn);
        st.player = turn == 1 ? Player::kSystem : Player::kEnvironment;
        st.labels = {x, y_base + y, t_base + turn};
        data.states.push_back(st);
        if (turn == 1) {
          for (int k = 0; k < 5; ++k) {
            const int y2 = grid.move(y, kSystemMoves[k].dr, kSystemMoves[k].dc);
            if (y2 >= 0) data.transitions.push_back({st.id, k, state_id(x, y2, 0)});
          }
        } else {
          for (int k = 0; k < 4; ++k) {
            const int x2 = grid.move(x, kEnvMoves[k].dr, kEnvMoves[k].dc);
            if (x2 >= 0) data.transitions.push_back({st.id, 5 + k, state_id(x2, y, 1)});
          }
        }
      }
    }
  }

  const int first_turn = cfg.first_mover == Player::kSystem ? 1 : 0;
  if (cfg.system_start) {
    data.initial.push_back(state_id(*cfg.env_start, *cfg.system_start, first_turn));
  } else {
    for (int x = 0; x < cells; ++x) {
      for (int y = 0; y < cells; ++y) {
        if (x != y) data.initial.push_back(state_id(x, y, first_turn));
      }
    }
  }

  GridGame out;
  out.game = Game::from_data(data);

  // No collision now (state constraint) nor ever (step constraint): the
  // step form x_i -> !y_i is evaluated on the current state; a violating
  // state loses because all its outgoing steps violate it.
  Assertion phi0 = !Assertion::var(0) || !Assertion::var(y_base + 0);
  Assertion phi1 = Assertion::implies(Assertion::var(0), !Assertion::var(y_base + 0));
  for (int c = 1; c < cells; ++c) {
    phi0 = std::move(phi0) && (!Assertion::var(c) || !Assertion::var(y_base + c));
    phi1 = std::move(phi1) &&
           Assertion::implies(Assertion::var(c), !Assertion::var(y_base + c));
  }
  out.spec.initial = std::move(phi0);
  out.spec.invariant = std::move(phi1);
  return out;
}

GridGame3 build_example3(const GridConfig& cfg) {
  check_config(cfg);
  if (!cfg.counter_max) throw ModelError("build_example3: counter_max is required");
  if (*cfg.counter_max < 1) throw ModelError("build_example3: counter_max must be positive");

  GridGame base = build_example1(cfg);
  const int cells = cfg.n * cfg.n;
  const auto [target_a, target_b] =
      cfg.liveness_targets.value_or(std::make_pair(cells - cfg.n, cfg.n - 1));

  CounterAugmentation aug;
  const int y_base = cells;
  aug.reset_predicate = Assertion::var(y_base + target_a) || Assertion::var(y_base + target_b);
  aug.counter_max = *cfg.counter_max;

  GridGame3 out;
  out.augment = counter_augment(base.game, aug);
  out.game = out.augment.game;
  // The collision constraints only mention x/y propositions, whose indices
  // are unchanged in the augmented game's proposition table.
  out.spec = base.spec;
  return out;
}

GridGame2 build_example2(const GridConfig& cfg) {
  GridGame base = build_example1(cfg);
  const int cells = cfg.n * cfg.n;
  const auto [sys_a, sys_b] =
      cfg.liveness_targets.value_or(std::make_pair(cells - cfg.n, cfg.n - 1));

  GridGame2 out;
  const auto& ap = base.game.ap();
  // Collision avoidance plus: if the environment robot keeps revisiting the
  // two corners of its own, the system robot must keep revisiting its target
  // cells. The fairness implication is beyond the solvable fragment, so the
  // formula is emitted textually for external tools.
  out.ltl = "(" + base.spec.initial.to_string(ap) + ") & G (" +
            base.spec.invariant.to_string(ap) + ") & ((G F x0 & G F x" +
            std::to_string(cells - 1) + ") -> (G F " + ap[cells + sys_b] + " & G F " +
            ap[cells + sys_a] + "))";
  out.game = std::move(base.game);
  return out;
}

RewardFn diagonal_reward(const Game& g) {
  // Recover robot positions from the labels so the oracle stays valid on
  // restricted and counter-augmented grid games alike.
  int max_cell = -1;
  std::vector<int> ap_kind(g.num_ap(), -1);  // 0 = x prop, 1 = y prop
  std::vector<int> ap_cell(g.num_ap(), -1);
  for (int i = 0; i < g.num_ap(); ++i) {
    const std::string& name = g.ap()[i];
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y')) continue;
    bool digits = true;
    for (size_t k = 1; k < name.size(); ++k) {
      digits = digits && std::isdigit(static_cast<unsigned char>(name[k]));
    }
    if (!digits) continue;
    ap_kind[i] = name[0] == 'x' ? 0 : 1;
    ap_cell[i] = std::stoi(name.substr(1));
    max_cell = std::max(max_cell, ap_cell[i]);
  }
  const int cells = max_cell + 1;
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
  if (cells < 4 || n * n != cells) {
    throw ModelError("diagonal_reward: game does not carry square-grid x/y propositions");
  }

  auto positions = std::make_shared<std::vector<std::pair<int, int>>>();
  positions->resize(g.num_states(), {-1, -1});
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (int lbl : g.labels(s)) {
      if (ap_kind[lbl] == 0) (*positions)[s].first = ap_cell[lbl];
      if (ap_kind[lbl] == 1) (*positions)[s].second = ap_cell[lbl];
    }
    if ((*positions)[s].first < 0 || (*positions)[s].second < 0) {
      throw ModelError("diagonal_reward: state " + std::to_string(s) +
                       " lacks x/y position labels");
    }
  }

  // Capture the game by pointer: reward oracles outlive no game in this
  // library's pipelines, and copying the arena per oracle would be wasteful.
  const Game* game = &g;
  return [game, positions, n](StateId s, ActionId a) -> double {
    if (game->player(s) != Player::kSystem) {
      throw ModelError("diagonal_reward: queried at a non-system state");
    }
    const StateId t = game->step(s, a);
    const auto [x, y] = (*positions)[t];
    const int dr = x / n - y / n;
    const int dc = x % n - y % n;
    return (dr == 1 || dr == -1) && (dc == 1 || dc == -1) ? 1.0 : 0.0;
  };
}

}  // namespace permrl
