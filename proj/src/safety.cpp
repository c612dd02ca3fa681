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

#include "permrl/safety.hpp"

#include <algorithm>
#include <string>

#include "permrl/errors.hpp"
#include "permrl/log.hpp"

namespace permrl {

namespace {

void check_spec(const Game& g, const SafetySpec& spec) {
  if (spec.initial.empty() || spec.invariant.empty()) {
    throw ModelError("safety spec must provide both the state and the step constraint");
  }
  if (spec.initial.uses_next()) {
    throw ModelError("the state constraint must not use next-step propositions");
  }
  const int max_var = std::max(spec.initial.max_var(), spec.invariant.max_var());
  if (max_var >= g.num_ap()) {
    throw ModelError("spec mentions proposition index " + std::to_string(max_var) +
                     " but the game has only " + std::to_string(g.num_ap()));
  }
}

}  // namespace

WinningRegion solve_safety(const Game& g, const SafetySpec& spec) {
  check_spec(g, spec);
  const int n = g.num_states();
  WinningRegion region;
  region.member.assign(n, 1);
  region.allowed.resize(n);

  // Pass 1: evaluate the step constraint on every edge, count each system
  // state's surviving moves, and index surviving edges by target. An
  // environment edge that violates the constraint loses its source outright:
  // the environment may take it.
  std::vector<char> edge_ok(g.num_transitions(), 0);
  std::vector<int> surviving(n, 0);
  std::vector<std::vector<StateId>> rev(n);  // target -> sources of surviving edges
  std::vector<StateId> dead_queue;
  auto kill = [&](StateId s) {
    if (region.member[s]) {
      region.member[s] = 0;
      dead_queue.push_back(s);
    }
  };

  int edge_base = 0;
  for (StateId s = 0; s < n; ++s) {
    const auto es = g.edges(s);
    const bool sys = g.player(s) == Player::kSystem;
    for (int k = 0; k < static_cast<int>(es.size()); ++k) {
      region.edge_operations++;
      const bool ok = spec.invariant.eval(g.label_bits(s), g.label_bits(es[k].to));
      edge_ok[edge_base + k] = ok ? 1 : 0;
      if (ok) {
        surviving[s]++;
        rev[es[k].to].push_back(s);
      } else if (!sys) {
        kill(s);
      }
    }
    if (es.empty() || (sys && surviving[s] == 0)) kill(s);
    edge_base += static_cast<int>(es.size());
  }

  // Pass 2: backward elimination. When a state dies, every surviving edge
  // into it is disabled: that empties system states out of moves and loses
  // environment states immediately.
  for (size_t h = 0; h < dead_queue.size(); ++h) {
    const StateId t = dead_queue[h];
    for (StateId p : rev[t]) {
      region.edge_operations++;
      if (!region.member[p]) continue;
      if (g.player(p) == Player::kSystem) {
        if (--surviving[p] == 0) kill(p);
      } else {
        kill(p);
      }
    }
  }

  // Pass 3: collect the moves that stay inside the fixed point.
  edge_base = 0;
  for (StateId s = 0; s < n; ++s) {
    const auto es = g.edges(s);
    if (region.member[s] && g.player(s) == Player::kSystem) {
      for (int k = 0; k < static_cast<int>(es.size()); ++k) {
        region.edge_operations++;
        if (edge_ok[edge_base + k] && region.member[es[k].to]) {
          region.allowed[s].push_back(es[k].action);
        }
      }
    }
    edge_base += static_cast<int>(es.size());
  }
  return region;
}

MemorylessStrategy maximally_permissive(const Game& g, const SafetySpec& spec,
                                        WinningRegion* region_out) {
  WinningRegion region = solve_safety(g, spec);
  for (StateId i : g.initial()) {
    if (!spec.initial.eval(g.label_bits(i), g.label_bits(i))) {
      throw UnrealizableError("initial state " + std::to_string(i) +
                              " violates the state constraint");
    }
    if (!region.contains(i)) {
      throw UnrealizableError("initial state " + std::to_string(i) +
                              " is outside the winning region");
    }
  }
  MemorylessStrategy mu;
  mu.choice = region.allowed;
  if (region_out != nullptr) *region_out = std::move(region);
  return mu;
}

AugmentResult counter_augment(const Game& g, const CounterAugmentation& aug) {
  if (aug.counter_max < 1) throw ModelError("counter_augment: counter_max must be positive");
  if (aug.reset_predicate.empty()) throw ModelError("counter_augment: missing reset predicate");
  if (aug.reset_predicate.uses_next()) {
    throw ModelError("counter_augment: reset predicate must not use next-step propositions");
  }
  if (aug.reset_predicate.max_var() >= g.num_ap()) {
    throw ModelError("counter_augment: reset predicate mentions unknown propositions");
  }
  const int c_max = aug.counter_max;

  std::vector<char> resets(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    resets[s] = aug.reset_predicate.eval(g.label_bits(s), g.label_bits(s)) ? 1 : 0;
  }

  GameData data;
  data.ap = g.ap();
  const int cnt_base = static_cast<int>(data.ap.size());
  for (int c = 0; c < c_max; ++c) {
    const std::string name = "cnt_" + std::to_string(c);
    if (g.ap_index(name) >= 0) {
      throw ModelError("counter_augment: the game already defines proposition '" + name + "'");
    }
    data.ap.push_back(name);
  }
  data.actions = g.actions();

  // Raw product id = state * c_max + counter; unreachable counter values are
  // pruned by the arena constructor.
  const auto raw = [c_max](StateId s, int c) { return s * c_max + c; };
  for (StateId s = 0; s < g.num_states(); ++s) {
    const bool sys = g.player(s) == Player::kSystem;
    for (int c = 0; c < c_max; ++c) {
      GameData::State st;
      st.id = raw(s, c);
      st.player = g.player(s);
      st.labels = g.labels(s);
      st.labels.push_back(cnt_base + c);
      data.states.push_back(st);
      for (const Game::Edge& e : g.edges(s)) {
        int c_next = c;
        if (sys) {
          // A system move either re-establishes the reset predicate on
          // arrival or spends one unit of the budget; moves that would
          // exhaust it are deleted, which is what enforces the bound.
          c_next = resets[e.to] ? 0 : c + 1;
          if (c_next >= c_max) continue;
        }
        data.transitions.push_back({st.id, e.action, raw(e.to, c_next)});
      }
    }
  }
  for (StateId i : g.initial()) data.initial.push_back(raw(i, 0));

  AugmentResult out;
  BuildReport report;
  out.game = Game::from_data(data, &report);
  out.origin_state.resize(out.game.num_states());
  out.counter.resize(out.game.num_states());
  for (StateId p = 0; p < out.game.num_states(); ++p) {
    out.origin_state[p] = report.kept_to_original[p] / c_max;
    out.counter[p] = report.kept_to_original[p] % c_max;
  }
  log::debug("counter_augment: " + std::to_string(out.game.num_states()) + " of " +
             std::to_string(g.num_states() * c_max) + " product states reachable");
  return out;
}

}  // namespace permrl
