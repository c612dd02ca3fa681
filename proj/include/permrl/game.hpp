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

#ifndef PERMRL_GAME_HPP_
#define PERMRL_GAME_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permrl/formula.hpp"

namespace permrl {

using StateId = std::int32_t;
using ActionId = std::int32_t;

enum class Player : std::uint8_t { kSystem = 0, kEnvironment = 1 };

std::string to_string(Player p);

struct ActionInfo {
  ActionId id = -1;
  Player owner = Player::kSystem;
  std::string name;
};

// Raw interchange form of a two-player turn-based deterministic game. This is
// what the JSON format maps onto; it may contain unreachable states and dead
// ends, which Game::from_data reports or prunes.
struct GameData {
  struct State {
    StateId id = -1;
    Player player = Player::kSystem;
    std::vector<int> labels;  // indices into `ap`
  };
  struct Transition {
    StateId from = -1;
    ActionId action = -1;
    StateId to = -1;
  };

  std::vector<State> states;
  std::vector<StateId> initial;
  std::vector<ActionInfo> actions;
  std::vector<Transition> transitions;
  std::vector<std::string> ap;
};

// Result of checking GameData against the structural invariants. `issues`
// holds hard violations (duplicate ids, ownership mismatches, nondeterminism,
// dangling references); dead ends and unreachable states are reported
// separately because some callers tolerate them.
struct ValidationReport {
  std::vector<std::string> issues;
  std::vector<StateId> dead_ends;  // states with no outgoing transition
  int unreachable = 0;             // states not reachable from `initial`
  bool hard_ok() const { return issues.empty(); }
  bool well_formed() const { return issues.empty() && dead_ends.empty() && unreachable == 0; }
};

ValidationReport validate_game(const GameData& data);

// What Game::from_data did to the raw data.
struct BuildReport {
  int pruned_unreachable = 0;
  std::vector<StateId> dead_ends;        // ids in the built game
  std::vector<StateId> kept_to_original; // built id -> id in the input data
};

// Immutable game arena: states are dense 0..n-1, each state owns a transition
// list sorted by action id, every state is reachable from the initial set.
// Turn-based: all actions leaving a state belong to that state's owner.
// Deterministic: at most one successor per (state, action).
class Game {
 public:
  struct Edge {
    ActionId action = -1;
    StateId to = -1;
  };

  Game() = default;

  // Validates hard invariants (throws ModelError listing every violation),
  // prunes states unreachable from the initial set, and renumbers densely in
  // ascending input-id order. Dead ends are kept and recorded in `report`.
  static Game from_data(const GameData& data, BuildReport* report = nullptr);

  int num_states() const { return static_cast<int>(player_.size()); }
  int num_transitions() const { return static_cast<int>(edge_pool_.size()); }
  int num_system_states() const { return num_system_states_; }
  int num_actions() const { return static_cast<int>(actions_.size()); }
  int num_ap() const { return static_cast<int>(ap_.size()); }

  Player player(StateId s) const { return player_[s]; }
  const std::vector<StateId>& initial() const { return initial_; }
  const std::vector<ActionInfo>& actions() const { return actions_; }
  const ActionInfo& action(ActionId a) const { return actions_[a]; }
  const std::vector<std::string>& ap() const { return ap_; }

  // Sorted by action id.
  std::span<const Edge> edges(StateId s) const {
    return {edge_pool_.data() + edge_begin_[s], edge_pool_.data() + edge_begin_[s + 1]};
  }
  std::vector<ActionId> available(StateId s) const;

  // Sorted ascending.
  const std::vector<int>& labels(StateId s) const { return labels_[s]; }
  const LabelBits& label_bits(StateId s) const { return label_bits_[s]; }
  bool has_label(StateId s, int ap) const { return label_bits_[s].test(ap); }

  // Index of a proposition name, or -1.
  int ap_index(std::string_view name) const;

  // Successor of s under a; throws ModelError when a is not available at s.
  StateId step(StateId s, ActionId a) const;

  // Edge slot of action a at state s (index into edges(s)), or -1.
  int edge_slot(StateId s, ActionId a) const;

  GameData to_data() const;

 private:
  std::vector<Player> player_;
  std::vector<std::vector<int>> labels_;
  std::vector<LabelBits> label_bits_;
  std::vector<StateId> initial_;
  std::vector<ActionInfo> actions_;
  std::vector<std::string> ap_;
  std::vector<int> edge_begin_;  // size n+1
  std::vector<Edge> edge_pool_;
  int num_system_states_ = 0;
};

}  // namespace permrl

#endif  // PERMRL_GAME_HPP_
