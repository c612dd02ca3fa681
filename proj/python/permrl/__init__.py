# Copyright 2026 The permrl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Maximally permissive strategy synthesis and maximin-Q learning.

The package wraps a C++ core. A typical round trip::

    import permrl

    game, spec = permrl.build_example1(n=3)
    strategy, region = permrl.synthesize(game, spec)
    restricted, state_map = permrl.restrict(game, strategy)
    result = permrl.learn(restricted, reward="diagonal", gamma=0.9, seed=0)
    greedy = permrl.greedy_strategy(restricted, result.q)
"""

from permrl._core import (
    Error,
    Game,
    LearnResult,
    ModelError,
    ParseError,
    Player,
    QTable,
    SafetySpec,
    StateMap,
    Strategy,
    SweepResult,
    UnrealizableError,
    WinningRegion,
    build_example1,
    build_example2,
    build_example3,
    check_envelope_sound,
    enumerate_winning_strategies,
    greedy_strategy,
    is_winning_strategy,
    learn,
    lift_strategy,
    restrict,
    strategy_includes,
    synthesize,
    value_iteration,
    worst_case_reward,
)

__version__ = "0.1.0"

__all__ = [
    "Error",
    "Game",
    "LearnResult",
    "ModelError",
    "ParseError",
    "Player",
    "QTable",
    "SafetySpec",
    "StateMap",
    "Strategy",
    "SweepResult",
    "UnrealizableError",
    "WinningRegion",
    "build_example1",
    "build_example2",
    "build_example3",
    "check_envelope_sound",
    "enumerate_winning_strategies",
    "greedy_strategy",
    "is_winning_strategy",
    "learn",
    "lift_strategy",
    "restrict",
    "strategy_includes",
    "synthesize",
    "value_iteration",
    "worst_case_reward",
]
