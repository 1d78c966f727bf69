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

#include "tankfleet/control.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tankfleet::control {

void RbcConfig::validate() const {
  if (!(low_c < high_c)) throw std::invalid_argument("RBC band requires low < high");
}

void PlannerConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("planner horizon must be >= 1");
  if (comfort_weight < 0) throw std::invalid_argument("comfort_weight must be >= 0");
  if (switch_limit < 0) throw std::invalid_argument("switch_limit must be >= 0");
  if (energy_per_on_step_kwh < 0) throw std::invalid_argument("energy per step must be >= 0");
}

int rbc_action(const ArrayXd& obs_temps, const RbcConfig& cfg, int prev_action) {
  cfg.validate();
  if (obs_temps.size() < 1) throw std::invalid_argument("rbc_action: empty observation");
  const double t = obs_temps[obs_temps.size() / 2];
  if (t < cfg.low_c) return 1;
  if (t > cfg.high_c) return 0;
  return prev_action;
}

ArrayXd slot_mean_volumes(const occupants::DrawSeries& history, int steps_per_day,
                          int n_history_days) {
  if (steps_per_day < 1) throw std::invalid_argument("steps_per_day must be >= 1");
  if (n_history_days < 1) throw std::invalid_argument("draw history spans less than one day");
  ArrayXd sums = ArrayXd::Zero(steps_per_day);
  for (const auto& d : history) {
    sums[static_cast<Eigen::Index>(d.step_index % steps_per_day)] += d.volume_l;
  }
  return sums / static_cast<double>(n_history_days);
}

ArrayXd forecast_draws(const occupants::DrawSeries& history, int steps_per_day,
                       int n_history_days, std::int64_t now_step, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const ArrayXd means = slot_mean_volumes(history, steps_per_day, n_history_days);
  ArrayXd out(horizon);
  for (int h = 0; h < horizon; ++h) {
    out[h] = means[static_cast<Eigen::Index>((now_step + h) % steps_per_day)];
  }
  return out;
}

namespace {

struct RolloutState {
  double obs[kMaxSensors];
  AgentMemory mem;
};

// Cost increment of executing `action` at a step whose entering profile is
// `proxy_temp` at the delivery proxy sensor. The draw leaves the vessel
// before in-step heating, so comfort is judged on the entering state.
inline double step_cost(const PlannerConfig& cfg, double proxy_temp, double forecast_vol,
                        int action, int* viol) {
  double c = action == 1 ? cfg.energy_per_on_step_kwh : 0.0;
  if (forecast_vol > 0.0 && proxy_temp < cfg.comfort_threshold_c) {
    c += cfg.comfort_weight;
    ++*viol;
  }
  return c;
}

void check_plan_inputs(const model::TransitionModel& fitted, const ArrayXd& obs_temps,
                       const ArrayXd& forecast, const PlannerConfig& cfg) {
  cfg.validate();
  if (!fitted.fitted()) throw std::invalid_argument("plan: model has no populated bins");
  if (obs_temps.size() != fitted.sensor_count) {
    throw std::invalid_argument("plan: sensor count mismatch");
  }
  if (forecast.size() < cfg.horizon) {
    throw std::invalid_argument("plan: forecast shorter than horizon");
  }
}

}  // namespace

double sequence_cost(const model::TransitionModel& fitted, const ArrayXd& obs_temps,
                     const ArrayXd& forecast, const PlannerConfig& cfg,
                     const AgentMemory& memory, const std::vector<int>& actions,
                     int* violations) {
  check_plan_inputs(fitted, obs_temps, forecast, cfg);
  if (static_cast<int>(actions.size()) != cfg.horizon) {
    throw std::invalid_argument("sequence_cost: action count != horizon");
  }
  const int proxy = fitted.sensor_count - 1;
  RolloutState st;
  for (int s = 0; s < fitted.sensor_count; ++s) st.obs[s] = obs_temps[s];
  st.mem = memory;
  double cost = 0.0;
  int viol = 0;
  for (int h = 0; h < cfg.horizon; ++h) {
    cost += step_cost(cfg, st.obs[proxy], forecast[h], actions[static_cast<std::size_t>(h)], &viol);
    if (h + 1 < cfg.horizon) {
      model::predict_into(fitted, st.obs, actions[static_cast<std::size_t>(h)], forecast[h],
                          st.mem, st.obs);
      st.mem.update(actions[static_cast<std::size_t>(h)], forecast[h]);
    }
  }
  if (violations != nullptr) *violations = viol;
  return cost;
}

PlanResult plan_detail(const model::TransitionModel& fitted, const ArrayXd& obs_temps,
                       const ArrayXd& forecast, const PlannerConfig& cfg,
                       const AgentMemory& memory) {
  check_plan_inputs(fitted, obs_temps, forecast, cfg);
  const int horizon = cfg.horizon;
  const int proxy = fitted.sensor_count - 1;

  PlanResult best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<int> actions(static_cast<std::size_t>(horizon));

  // Depth-first over sequences with <= switch_limit changes, sharing prefix
  // rollouts and pruning on the (monotone) partial cost. Off-first ordering
  // plus strict improvement breaks cost ties toward off.
  auto dfs = [&](auto&& self, int h, int action, int switches_left, const RolloutState& st,
                 double cost, int viol) -> void {
    cost += step_cost(cfg, st.obs[proxy], forecast[h], action, &viol);
    if (cost >= best.cost) return;
    actions[static_cast<std::size_t>(h)] = action;
    if (h + 1 == horizon) {
      best.cost = cost;
      best.first_action = actions[0];
      best.predicted_violations = viol;
      best.actions = actions;
      return;
    }
    RolloutState next;
    model::predict_into(fitted, st.obs, action, forecast[h], st.mem, next.obs);
    next.mem = st.mem;
    next.mem.update(action, forecast[h]);
    self(self, h + 1, action, switches_left, next, cost, viol);
    if (switches_left > 0) self(self, h + 1, 1 - action, switches_left - 1, next, cost, viol);
  };

  RolloutState root;
  for (int s = 0; s < fitted.sensor_count; ++s) root.obs[s] = obs_temps[s];
  root.mem = memory;
  dfs(dfs, 0, 0, cfg.switch_limit, root, 0.0, 0);
  dfs(dfs, 0, 1, cfg.switch_limit, root, 0.0, 0);
  return best;
}

int plan(const model::TransitionModel& fitted, const ArrayXd& obs_temps, const ArrayXd& forecast,
         const PlannerConfig& cfg, const AgentMemory& memory) {
  return plan_detail(fitted, obs_temps, forecast, cfg, memory).first_action;
}

double reward(double energy_kwh, int violations, double lambda) {
  if (energy_kwh < 0 || violations < 0 || lambda < 0) {
    throw std::invalid_argument("reward: inputs must be non-negative");
  }
  return -energy_kwh - lambda * violations;
}

}  // namespace tankfleet::control
