// Copyright 2026 The tankfleet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "tankfleet/model_learning.hpp"
#include "tankfleet/occupants.hpp"
#include "tankfleet/types.hpp"

namespace tankfleet::control {

/// Hysteresis thermostat band on one sensor reading.
struct RbcConfig {
  double low_c = 55.0;
  double high_c = 65.0;
  void validate() const;  // low < high
};

/// Below the band: on. Above: off. Inside: hold the previous action. Reads
/// the mid sensor of the observation (index len/2; the sole sensor for a
/// midpoint config).
int rbc_action(const ArrayXd& obs_temps, const RbcConfig& cfg, int prev_action);

/// Historical mean drawn volume per time-of-day slot: total volume seen at
/// the slot divided by the number of elapsed full days. Throws unless
/// n_history_days >= 1.
ArrayXd slot_mean_volumes(const occupants::DrawSeries& history, int steps_per_day,
                          int n_history_days);

/// Expected draw volume for each of the next `horizon` steps starting at
/// `now_step`, from the slot means of `history`.
ArrayXd forecast_draws(const occupants::DrawSeries& history, int steps_per_day,
                       int n_history_days, std::int64_t now_step, int horizon);

struct PlannerConfig {
  int horizon = 16;
  double comfort_threshold_c = 45.0;
  double comfort_weight = 10.0;       // kWh-equivalent per predicted violation
  int switch_limit = 2;               // max action changes within the horizon
  double energy_per_on_step_kwh = 0.6;
  void validate() const;
};

struct PlanResult {
  int first_action = 0;
  double cost = 0.0;
  int predicted_violations = 0;
  std::vector<int> actions;  // the chosen horizon-length sequence
};

/// Cost of one explicit action sequence: per-step electrical energy plus
/// comfort_weight per step whose entering predicted profile delivers below
/// the comfort threshold while the forecast expects a draw. The delivery
/// proxy is the topmost sensor. The rollout feeds predictions (with
/// constraints) forward and evolves the agent memory with the planned
/// actions and forecast volumes.
double sequence_cost(const model::TransitionModel& fitted, const ArrayXd& obs_temps,
                     const ArrayXd& forecast, const PlannerConfig& cfg,
                     const AgentMemory& memory, const std::vector<int>& actions,
                     int* violations = nullptr);

/// Exact search over all horizon-length binary sequences with at most
/// switch_limit changes (depth-first with branch-and-bound on the partial
/// cost). Ties break toward off as the first action.
PlanResult plan_detail(const model::TransitionModel& fitted, const ArrayXd& obs_temps,
                       const ArrayXd& forecast, const PlannerConfig& cfg,
                       const AgentMemory& memory);

/// First action of the minimal-cost sequence.
int plan(const model::TransitionModel& fitted, const ArrayXd& obs_temps,
         const ArrayXd& forecast, const PlannerConfig& cfg, const AgentMemory& memory);

/// Reward stream: -energy - lambda * violations.
double reward(double energy_kwh, int violations, double lambda);

}  // namespace tankfleet::control
