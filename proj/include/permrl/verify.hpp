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

#ifndef PERMRL_VERIFY_HPP_
#define PERMRL_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "permrl/game.hpp"
#include "permrl/safety.hpp"
#include "permrl/strategy.hpp"

namespace permrl {

// Independent, deliberately naive checks used to cross-validate the solver.
// Everything here favours obviousness over speed; nothing shares code with
// solve_safety.

// Whether the deterministic strategy `mu` wins `spec` from every initial
// state: initial constraint holds, every reachable edge under (mu, arbitrary
// environment) satisfies the invariant, and no reachable state gets stuck.
bool is_winning_strategy(const Game& g, const SafetySpec& spec, const MemorylessStrategy& mu);

// Recomputes the winning region by whole-arena passes: repeatedly drop
// states that can no longer be held safe, rescanning everything each pass.
// Quadratic, but independent of the worklist solver.
WinningRegion naive_winning_region(const Game& g, const SafetySpec& spec);

// Exhaustively enumerates deterministic memoryless strategies over the
// system states (up to `limit` combinations; throws ModelError beyond that)
// and returns those that win `spec`.
std::vector<MemorylessStrategy> enumerate_winning_strategies(const Game& g,
                                                             const SafetySpec& spec,
                                                             std::int64_t limit = 1000000);

// Checks that every run the permissive strategy allows stays within the
// invariant for `depth` steps: walks all reachable (state, action) pairs
// under mu rather than materializing runs. Returns an empty string on
// success, else a description of the first violation.
std::string check_envelope_sound(const Game& g, const SafetySpec& spec,
                                 const MemorylessStrategy& mu, int depth);

// Spot-checks the greatest-fixed-point property: every state outside
// `region` has a concrete elimination reason in terms of `region` itself
// (system: no invariant-respecting edge back into the region; environment:
// some edge out of it, an invariant-violating edge, or no edge at all).
// Returns an empty string on success.
std::string check_elimination_reasons(const Game& g, const SafetySpec& spec,
                                      const WinningRegion& region);

}  // namespace permrl

#endif  // PERMRL_VERIFY_HPP_
