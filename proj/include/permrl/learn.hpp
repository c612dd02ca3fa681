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

#ifndef PERMRL_LEARN_HPP_
#define PERMRL_LEARN_HPP_

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "permrl/game.hpp"
#include "permrl/strategy.hpp"

namespace permrl {

// Action values indexed in parallel with the game's edge lists: q[s][k] is
// the value of the k-th edge of state s (edges are sorted by action id).
struct QTable {
  std::vector<std::vector<double>> q;
  double gamma = 0.0;

  static QTable zeros(const Game& g, double gamma);

  // State value under this table: max over edges at system states, min at
  // environment states; 0 at states with no edges.
  double value(const Game& g, StateId s) const;
  // Value of action a at s; throws ModelError if a is not available at s.
  double at(const Game& g, StateId s, ActionId a) const;
};

struct ValueFunction {
  std::vector<double> v;
};

// Instantaneous rewards materialized per edge, zero on environment rows.
// Planners (value iteration, worst-case evaluation) read this table; the
// learner deliberately takes an opaque RewardFn instead and queries it only
// at transition time.
struct RewardTable {
  std::vector<std::vector<double>> r;

  static RewardTable zeros(const Game& g);
  // Samples fn on every system (state, action) pair.
  static RewardTable from_fn(const Game& g, const RewardFn& fn);

  double max_abs() const;
};

// One entry per completed iteration window: (iterations completed, largest
// absolute change of any state value within the window).
struct ConvergenceLog {
  std::vector<std::pair<std::int64_t, double>> entries;
  bool converged = false;
  std::int64_t iterations = 0;
};

struct LearnConfig {
  double gamma = 0.9;

  // Per-pair learning rate: alpha = (1 + visits(s, a) / alpha_scale) ^ -alpha_exponent.
  // Any exponent in (0.5, 1] satisfies the divergent-sum / convergent-square-
  // sum conditions; the default decays slowly so rarely explored pairs keep
  // tracking fresh targets on deterministic games.
  double alpha_scale = 100.0;
  double alpha_exponent = 0.6;

  // Exploration: both players act epsilon-greedily on the shared table.
  // epsilon anneals linearly from `epsilon_start` to `epsilon_end` over the
  // first `epsilon_anneal_frac` fraction of the iteration budget. Updates are
  // off-policy, so a high floor costs nothing and keeps rare pairs fresh.
  double epsilon_start = 1.0;
  double epsilon_end = 0.3;
  double epsilon_anneal_frac = 0.5;

  // Total number of single-transition updates. 0 picks a budget from the
  // game's size.
  std::int64_t max_iterations = 0;
  // Episodes restart from a uniformly random initial state every
  // `episode_length` transitions.
  int episode_length = 100;

  // Convergence tracking: after every `window` iterations, the largest state
  // value change seen within the window is logged. Learning stops early once
  // the sup-norm maximin Bellman residual of the table falls below
  // `threshold` (0 disables early stopping); the table's distance from the
  // fixed point is then at most threshold / (1 - gamma).
  std::int64_t window = 10000;
  double threshold = 5e-5;

  std::uint64_t seed = 0;

  // Called after each completed window with (iterations done, table,
  // window's max value change). Used for checkpoint dumps and tests.
  std::function<void(std::int64_t, const QTable&, double)> on_window;
};

struct LearnResult {
  QTable q;
  ValueFunction v;
  ConvergenceLog log;
};

// Temporal-difference learning of the worst-case action values on a
// dead-end-free game, self-play with a shared table:
//   system step:       q(s,a) += alpha * (r + gamma * v(s') - q(s,a))
//   environment step:  q(s,a) += alpha * (v(s') - q(s,a))
// where v is max over system actions and min over environment actions.
// Discounting advances only on system steps; rewards are queried from
// `reward` only for system pairs, at the moment the pair is taken.
LearnResult maximin_q_learn(const Game& g, const RewardFn& reward, const LearnConfig& cfg);

struct SweepResult {
  QTable q;
  ValueFunction v;
  int sweeps = 0;
};

// Exact fixed point of the same backup by synchronous sweeps, to `tol` in
// sup norm over action values. Dead ends are treated as value 0.
SweepResult maximin_value_iteration(const Game& g, const RewardTable& reward, double gamma,
                                    double tol = 1e-12, int max_sweeps = 1000000);

// Deterministic strategy picking the q-maximal action at every system state
// that has at least one action; ties break to the lowest action id.
MemorylessStrategy greedy_strategy(const Game& g, const QTable& q);

// Interval bracketing a discounted reward evaluated to a finite horizon: the
// infinite-horizon value lies within [lower, upper].
struct RewardBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Worst-case discounted reward of playing the deterministic strategy `mu`
// from `from` while the environment minimizes, evaluated over the first
// `horizon` system moves. The tail beyond the horizon contributes between 0
// and gamma^horizon * max|r| / (1 - gamma), which is the gap between the
// returned bounds. Environment subplays that postpone system moves forever
// contribute 0. Throws ModelError if `mu` is not deterministic or leaves a
// reachable system state uncovered.
RewardBounds worst_case_reward(const Game& g, const MemorylessStrategy& mu,
                               const RewardTable& reward, StateId from, double gamma,
                               int horizon);

// Discounted sum of a trace's rewards, where the discount exponent advances
// only on system-owned steps.
double discounted_reward(const RunTrace& trace, double gamma);

}  // namespace permrl

#endif  // PERMRL_LEARN_HPP_
