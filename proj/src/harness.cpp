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

#include "tankfleet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace tankfleet::harness {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kRbc: return "RBC";
    case Strategy::kSarlK: return "SARL_K";
    case Strategy::kMarlK: return "MARL_K";
    case Strategy::kSarlKI: return "SARL_KI";
    case Strategy::kMarlKI: return "MARL_KI";
  }
  throw std::logic_error("bad strategy");
}

Strategy strategy_from_string(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "RBC") return Strategy::kRbc;
  if (up == "SARL_K") return Strategy::kSarlK;
  if (up == "MARL_K") return Strategy::kMarlK;
  if (up == "SARL_KI") return Strategy::kSarlKI;
  if (up == "MARL_KI") return Strategy::kMarlKI;
  throw std::invalid_argument("unknown strategy: " + name);
}

bool is_marl(Strategy s) { return s == Strategy::kMarlK || s == Strategy::kMarlKI; }
bool uses_planner(Strategy s) { return s != Strategy::kRbc; }
bool uses_array_sensor(Strategy s) { return s == Strategy::kSarlKI || s == Strategy::kMarlKI; }

std::vector<Strategy> all_strategies() {
  return {Strategy::kRbc, Strategy::kSarlK, Strategy::kMarlK, Strategy::kSarlKI,
          Strategy::kMarlKI};
}

sensing::SensorConfig ExperimentConfig::sensor_for(Strategy s) const {
  sensing::SensorConfig c;
  c.kind = uses_array_sensor(s) ? sensing::SensorConfig::Kind::kArray
                                : sensing::SensorConfig::Kind::kMidpoint;
  c.array_k = array_k;
  c.noise_std_c = sensor_noise_std_c;
  return c;
}

model::FeatureBinning ExperimentConfig::feature_binning() const {
  model::FeatureBinning b;
  b.temp_bin_width_c = temp_bin_width_c;
  b.temp_min_c = vessel.inlet_temp_c;
  b.temp_max_c = vessel.max_temp_c;
  return b;
}

explore::StateBinning ExperimentConfig::state_binning(int sensor_count) const {
  explore::StateBinning b;
  b.temp_bin_width_c = temp_bin_width_c;
  b.temp_min_c = vessel.inlet_temp_c;
  b.temp_max_c = vessel.max_temp_c;
  b.sensor_count = sensor_count;
  return b;
}

void ExperimentConfig::validate() const {
  if (strategies.empty()) throw std::invalid_argument("no strategies selected");
  if (n_households < 1) throw std::invalid_argument("n_households must be >= 1");
  for (auto s : strategies) {
    if (is_marl(s) && n_households < 2) {
      throw std::invalid_argument("MARL strategies require n_households >= 2");
    }
  }
  if (n_days < 1) throw std::invalid_argument("n_days must be >= 1");
  if (model_refresh_days < 1) throw std::invalid_argument("model_refresh_days must be >= 1");
  if (!(heldout_fraction >= 0.0 && heldout_fraction < 1.0)) {
    throw std::invalid_argument("heldout_fraction must lie in [0,1)");
  }
  if (warmup_days < 0) throw std::invalid_argument("warmup_days must be >= 0");
  if (archetype_mix.empty()) throw std::invalid_argument("archetype_mix must be non-empty");
  if (occupant_intensity_scale < 0) {
    throw std::invalid_argument("occupant_intensity_scale must be >= 0");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon out of range");
  if (bonus_weight < 0) throw std::invalid_argument("bonus_weight must be >= 0");
  if (safety_lookahead_steps < 0) throw std::invalid_argument("safety lookahead must be >= 0");
  if (exploration_lookahead_steps < 1) {
    throw std::invalid_argument("exploration lookahead must be >= 1");
  }
  if (forecast_floor_l < 0) throw std::invalid_argument("forecast_floor_l must be >= 0");
  vessel.validate();
  rbc.validate();
  planner.validate();
  (void)steps_per_day(vessel.dt_s);
  sensor_for(Strategy::kRbc).validate(vessel.n_layers);
  sensor_for(Strategy::kSarlKI).validate(vessel.n_layers);
  feature_binning().validate();
  if (!household_order.empty()) {
    if (static_cast<int>(household_order.size()) != n_households) {
      throw std::invalid_argument("household_order must cover every household");
    }
    std::vector<int> sorted = household_order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n_households; ++i) {
      if (sorted[static_cast<std::size_t>(i)] != i) {
        throw std::invalid_argument("household_order must be a permutation");
      }
    }
  }
}

double StrategyMetrics::headline_coverage(int day) const {
  const auto& d = daily.at(static_cast<std::size_t>(day));
  const bool single_agent = strategy == Strategy::kSarlK || strategy == Strategy::kSarlKI;
  return single_agent ? d.coverage_best : d.coverage_pooled;
}

bool is_heldout_sample(int household_id, std::uint64_t sample_index, double heldout_fraction) {
  if (heldout_fraction <= 0.0) return false;
  std::uint64_t h = splitmix64(0x48454C44ull ^
                               splitmix64(static_cast<std::uint64_t>(household_id) *
                                          0x9E3779B97F4A7C15ull) ^
                               splitmix64(sample_index * 0xC2B2AE3D27D4EB4Full));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < heldout_fraction;
}

namespace {

struct HouseholdSim {
  int id = 0;
  vessel::VesselState state;
  sensing::Observation obs;
  int prev_action = 0;
  AgentMemory mem;
  std::mt19937_64 noise_rng;
  std::mt19937_64 policy_rng;
  const occupants::DrawSeries* draws = nullptr;
  std::size_t draw_cursor = 0;
  ArrayXd slot_means;  // updated at day boundaries from completed days only
  bool has_history = false;
  model::TransitionDataset logged;
  explore::VisitCounts own_counts;
  explore::VisitCounts day_delta;
  std::unordered_set<std::int64_t> targets;
  double day_energy = 0.0;
  int day_violations = 0;
  double eval_energy = 0.0;
  int eval_violations = 0;
};

double draw_at(HouseholdSim& h, std::int64_t step) {
  const auto& d = *h.draws;
  while (h.draw_cursor < d.size() && d[h.draw_cursor].step_index < step) ++h.draw_cursor;
  if (h.draw_cursor < d.size() && d[h.draw_cursor].step_index == step) {
    return d[h.draw_cursor].volume_l;
  }
  return 0.0;
}

// Model rollout endpoint under a constant action: the observation the agent
// expects if it commits to `action` for `steps` steps. These are the
// candidate observations scored by targeted exploration.
ArrayXd rollout_endpoint(const model::TransitionModel& fitted, const ArrayXd& obs, int action,
                         const ArrayXd& forecast, const AgentMemory& memory, int steps) {
  const int k = fitted.sensor_count;
  double buf[kMaxSensors];
  for (int s = 0; s < k; ++s) buf[s] = obs[s];
  AgentMemory mem = memory;
  const int n = std::min<int>(steps, static_cast<int>(forecast.size()));
  for (int h = 0; h < n; ++h) {
    model::predict_into(fitted, buf, action, forecast[h], mem, buf);
    mem.update(action, forecast[h]);
  }
  ArrayXd out(k);
  for (int s = 0; s < k; ++s) out[s] = buf[s];
  return out;
}

// Comfort guard for exploration overrides. Forcing the heater on cannot cool
// the vessel, so it is always comfort-safe; a forced off is vetoed when the
// model predicts a delivery below the planner's comfort target while a draw
// is expected within the lookahead (assuming the heater then stays off).
bool exploration_safe(const model::TransitionModel& fitted, const ArrayXd& obs, int first_action,
                      const ArrayXd& forecast, const control::PlannerConfig& pcfg,
                      const AgentMemory& memory, int lookahead) {
  if (first_action == 1) return true;
  const int k = fitted.sensor_count;
  const int proxy = k - 1;
  double buf[kMaxSensors];
  for (int s = 0; s < k; ++s) buf[s] = obs[s];
  AgentMemory mem = memory;
  const int steps = std::min<int>(lookahead, static_cast<int>(forecast.size()));
  for (int h = 0; h < steps; ++h) {
    if (forecast[h] > 0.0 && buf[proxy] < pcfg.comfort_threshold_c) return false;
    model::predict_into(fitted, buf, 0, forecast[h], mem, buf);
    mem.update(0, forecast[h]);
  }
  return true;
}

struct StrategyOutcome {
  StrategyMetrics metrics;
  StrategyDetail detail;
};

StrategyOutcome simulate_strategy(const ExperimentConfig& cfg, Strategy strat,
                                  const std::vector<occupants::DrawSeries>& all_draws) {
  const int n = cfg.n_households;
  const int spd = steps_per_day(cfg.vessel.dt_s);
  const auto sensor = cfg.sensor_for(strat);
  const int sensor_count = sensor.sensor_count();
  const auto fbin = cfg.feature_binning();
  const auto sbin = cfg.state_binning(sensor_count);
  const model::KnowledgeConfig knowledge =
      uses_planner(strat) ? model::KnowledgeConfig::full() : model::KnowledgeConfig{};

  control::PlannerConfig pcfg = cfg.planner;
  pcfg.energy_per_on_step_kwh = cfg.vessel.energy_per_on_step_kwh();
  const int forecast_len = std::max(pcfg.horizon, cfg.safety_lookahead_steps);

  explore::PolicyKind policy_kind = explore::PolicyKind::kNone;
  if (uses_planner(strat)) {
    switch (cfg.exploration_override) {
      case ExplorationKind::kDefault:
        policy_kind = is_marl(strat) ? explore::PolicyKind::kTargeted
                                     : explore::PolicyKind::kEpsGreedy;
        break;
      case ExplorationKind::kNone: policy_kind = explore::PolicyKind::kNone; break;
      case ExplorationKind::kEpsGreedy: policy_kind = explore::PolicyKind::kEpsGreedy; break;
      case ExplorationKind::kTargeted: policy_kind = explore::PolicyKind::kTargeted; break;
    }
  }

  explore::VisitCounts pooled;
  for (std::int64_t bin : explore::reachable_bins(sbin)) pooled.record(bin, 0);

  std::vector<HouseholdSim> homes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& h = homes[static_cast<std::size_t>(i)];
    h.id = i;
    h.state = vessel::make_uniform_state(cfg.vessel, cfg.warm_start_temp_c);
    h.noise_rng.seed(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), SeedStream::kNoise));
    h.policy_rng.seed(
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), SeedStream::kPolicy));
    h.draws = &all_draws[static_cast<std::size_t>(i)];
    h.logged.sensor_count = sensor_count;
    h.obs = sensing::observe(h.state, cfg.vessel, sensor, h.noise_rng, 0);
    h.slot_means = ArrayXd::Zero(spd);
  }

  // SARL keeps one model per household; MARL and the RBC metrics model are
  // pooled. model_ready gates the switch from the RBC bootstrap phase.
  const bool per_household_models = strat == Strategy::kSarlK || strat == Strategy::kSarlKI;
  std::vector<model::TransitionModel> models;
  bool model_ready = false;
  double latest_mae = std::numeric_limits<double>::quiet_NaN();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (!cfg.household_order.empty()) order = cfg.household_order;

  StrategyMetrics metrics;
  metrics.strategy = strat;
  metrics.household_energy_kwh.assign(static_cast<std::size_t>(n), 0.0);
  metrics.household_violations.assign(static_cast<std::size_t>(n), 0);

  ArrayXd forecast = ArrayXd::Zero(forecast_len);

  for (int day = 0; day < cfg.n_days; ++day) {
    for (int idx : order) {
      auto& h = homes[static_cast<std::size_t>(idx)];
      h.day_energy = 0.0;
      h.day_violations = 0;
      for (std::int64_t t = static_cast<std::int64_t>(day) * spd; t < static_cast<std::int64_t>(day + 1) * spd;
           ++t) {
        int action = 0;
        if (uses_planner(strat) && model_ready && h.has_history &&
            h.obs.sensor_temps[h.obs.sensor_temps.size() - 1] < pcfg.comfort_threshold_c) {
          // Comfort failsafe: with the delivery proxy already below the
          // planner's target, reheat unconditionally. This is the runtime
          // extension of the RBC bootstrap: it bounds cold deliveries and is
          // the source of the sustained reheat-from-cold transitions the
          // model cannot otherwise observe.
          action = 1;
        } else if (uses_planner(strat) && model_ready && h.has_history) {
          for (int f = 0; f < forecast_len; ++f) {
            forecast[f] = std::max(h.slot_means[static_cast<Eigen::Index>((t + f) % spd)],
                                   cfg.forecast_floor_l);
          }
          const model::TransitionModel& m =
              per_household_models ? models[static_cast<std::size_t>(idx)] : models[0];
          const int greedy = control::plan(m, h.obs.sensor_temps, forecast, pcfg, h.mem);
          action = greedy;
          if (policy_kind != explore::PolicyKind::kNone) {
            const ArrayXd cand_off = rollout_endpoint(m, h.obs.sensor_temps, 0, forecast, h.mem,
                                                      cfg.exploration_lookahead_steps);
            const ArrayXd cand_on = rollout_endpoint(m, h.obs.sensor_temps, 1, forecast, h.mem,
                                                     cfg.exploration_lookahead_steps);
            explore::ExplorationPolicy policy;
            policy.kind = policy_kind;
            policy.epsilon = cfg.epsilon;
            policy.bonus_weight = cfg.bonus_weight;
            policy.counts =
                policy_kind == explore::PolicyKind::kTargeted ? &pooled : &h.own_counts;
            policy.target_bins = h.targets;
            const int proposed = explore::choose_action(policy, greedy, cand_off, cand_on, sbin,
                                                        h.policy_rng);
            if (proposed != greedy &&
                exploration_safe(m, h.obs.sensor_temps, proposed, forecast, pcfg, h.mem,
                                 cfg.safety_lookahead_steps)) {
              action = proposed;
            }
          }
        } else {
          action = control::rbc_action(h.obs.sensor_temps, cfg.rbc, h.prev_action);
        }

        const double vol = draw_at(h, t);
        const auto r = vessel::step(h.state, cfg.vessel, {action == 1, vol});
        h.day_energy += r.energy_used_kwh;
        if (vol > 0.0 && r.delivered_temp_c.value() < kComfortTempC) ++h.day_violations;
        if (day >= cfg.warmup_days) {
          h.eval_energy += r.energy_used_kwh;
          if (vol > 0.0 && r.delivered_temp_c.value() < kComfortTempC) ++h.eval_violations;
        }

        auto next_obs = sensing::observe(r.next_state, cfg.vessel, sensor, h.noise_rng, t + 1);
        h.logged.samples.push_back(model::TransitionSample{
            h.obs, action, vol, next_obs, h.id, h.mem.time_since_reheat, h.mem.vol_since_reheat});
        h.day_delta.record(explore::bin_of(h.obs.sensor_temps, sbin));

        h.mem.update(action, vol);
        h.prev_action = action;
        h.state = std::move(r.next_state);
        h.obs = std::move(next_obs);
      }
    }

    // Day boundary: the single synchronization point. Always in id order so
    // results cannot depend on the processing order above.
    for (auto& h : homes) {
      h.own_counts.merge(h.day_delta);
      pooled.merge(h.day_delta);
      h.day_delta = explore::VisitCounts{};
      occupants::DrawSeries past;
      past.reserve(h.draws->size());
      const std::int64_t limit = static_cast<std::int64_t>(day + 1) * spd;
      for (const auto& d : *h.draws) {
        if (d.step_index < limit) past.push_back(d);
      }
      h.slot_means = control::slot_mean_volumes(past, spd, day + 1);
      h.has_history = true;
    }

    if ((day + 1) % cfg.model_refresh_days == 0) {
      if (per_household_models) {
        models.assign(static_cast<std::size_t>(n), model::TransitionModel{});
        bool all_fitted = true;
        double mae_sum = 0.0;
        int mae_count = 0;
        for (int i = 0; i < n; ++i) {
          auto& h = homes[static_cast<std::size_t>(i)];
          model::TransitionDataset train{{}, sensor_count};
          model::TransitionDataset heldout{{}, sensor_count};
          for (std::size_t s = 0; s < h.logged.samples.size(); ++s) {
            (is_heldout_sample(i, s, cfg.heldout_fraction) ? heldout : train)
                .samples.push_back(h.logged.samples[s]);
          }
          if (train.samples.empty()) {
            all_fitted = false;
            continue;
          }
          models[static_cast<std::size_t>(i)] = model::fit(train, knowledge, fbin);
          if (!heldout.samples.empty()) {
            mae_sum += model::evaluate_mae(models[static_cast<std::size_t>(i)], heldout);
            ++mae_count;
          }
        }
        model_ready = all_fitted;
        if (mae_count > 0) latest_mae = mae_sum / mae_count;
      } else {
        model::TransitionDataset train{{}, sensor_count};
        model::TransitionDataset heldout{{}, sensor_count};
        for (int i = 0; i < n; ++i) {
          auto& h = homes[static_cast<std::size_t>(i)];
          for (std::size_t s = 0; s < h.logged.samples.size(); ++s) {
            (is_heldout_sample(i, s, cfg.heldout_fraction) ? heldout : train)
                .samples.push_back(h.logged.samples[s]);
          }
        }
        if (!train.samples.empty()) {
          models.assign(1, model::fit(train, knowledge, fbin));
          model_ready = true;
          if (!heldout.samples.empty()) latest_mae = model::evaluate_mae(models[0], heldout);
        }
      }
      if (is_marl(strat) && policy_kind == explore::PolicyKind::kTargeted) {
        const auto lists = explore::assign_targets(pooled, sbin, n);
        for (int i = 0; i < n; ++i) {
          auto& h = homes[static_cast<std::size_t>(i)];
          h.targets.clear();
          h.targets.insert(lists[static_cast<std::size_t>(i)].begin(),
                           lists[static_cast<std::size_t>(i)].end());
        }
      }
    }

    DailyMetrics dm;
    dm.day = day;
    for (auto& h : homes) {
      dm.energy_kwh += h.day_energy;
      dm.violations += h.day_violations;
    }
    dm.coverage_pooled = explore::coverage(pooled, sbin);
    dm.coverage_best = 0.0;
    for (auto& h : homes) {
      dm.coverage_best = std::max(dm.coverage_best, explore::coverage(h.own_counts, sbin));
    }
    dm.model_mae_c = latest_mae;
    metrics.daily.push_back(dm);
  }

  for (int i = 0; i < n; ++i) {
    auto& h = homes[static_cast<std::size_t>(i)];
    metrics.household_energy_kwh[static_cast<std::size_t>(i)] = h.eval_energy;
    metrics.household_violations[static_cast<std::size_t>(i)] = h.eval_violations;
    metrics.cumulative_energy_kwh += h.eval_energy;
    metrics.violations += h.eval_violations;
    metrics.logged_samples += h.logged.samples.size();
  }
  metrics.final_mae_c = latest_mae;
  metrics.final_coverage = metrics.headline_coverage(cfg.n_days - 1);

  StrategyDetail detail;
  detail.strategy = strat;
  detail.models = std::move(models);
  detail.pooled_counts = std::move(pooled);
  for (auto& h : homes) {
    detail.datasets.push_back(std::move(h.logged));
    detail.agent_counts.push_back(std::move(h.own_counts));
  }
  return StrategyOutcome{std::move(metrics), std::move(detail)};
}

}  // namespace

std::vector<occupants::DrawSeries> household_draws(const ExperimentConfig& cfg, int n_days) {
  const int spd = steps_per_day(cfg.vessel.dt_s);
  std::vector<occupants::DrawSeries> draws;
  draws.reserve(static_cast<std::size_t>(cfg.n_households));
  for (int i = 0; i < cfg.n_households; ++i) {
    const auto archetype = cfg.archetype_mix[static_cast<std::size_t>(i) % cfg.archetype_mix.size()];
    const auto seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), SeedStream::kOccupant);
    auto profile = occupants::make_profile(archetype, i, seed, spd);
    profile.base_intensity = (profile.base_intensity * cfg.occupant_intensity_scale).cwiseMin(1.0);
    draws.push_back(occupants::generate_draws(profile, n_days, seed));
  }
  return draws;
}

RunDetail run_experiment_detail(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto draws = household_draws(cfg, cfg.n_days);

  std::vector<std::future<StrategyOutcome>> futures;
  futures.reserve(cfg.strategies.size());
  for (auto strat : cfg.strategies) {
    futures.push_back(std::async(std::launch::async, [&cfg, strat, &draws] {
      return simulate_strategy(cfg, strat, draws);
    }));
  }

  RunDetail out;
  out.report.n_households = cfg.n_households;
  out.report.n_days = cfg.n_days;
  out.report.warmup_days = cfg.warmup_days;
  for (auto& f : futures) {
    auto outcome = f.get();
    out.report.strategies.push_back(std::move(outcome.metrics));
    out.details.push_back(std::move(outcome.detail));
  }
  return out;
}

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  return run_experiment_detail(cfg).report;
}

EvalSets build_common_eval(const ExperimentConfig& cfg, int n_days) {
  cfg.validate();
  if (n_days < 1) throw std::invalid_argument("n_days must be >= 1");
  const int spd = steps_per_day(cfg.vessel.dt_s);
  const auto draws = household_draws(cfg, n_days);
  const auto mid_sensor = cfg.sensor_for(Strategy::kMarlK);
  const auto arr_sensor = cfg.sensor_for(Strategy::kMarlKI);

  EvalSets eval;
  eval.midpoint.sensor_count = mid_sensor.sensor_count();
  eval.array.sensor_count = arr_sensor.sensor_count();

  for (int i = 0; i < cfg.n_households; ++i) {
    HouseholdSim h;
    h.id = i;
    h.state = vessel::make_uniform_state(cfg.vessel, cfg.warm_start_temp_c);
    h.draws = &draws[static_cast<std::size_t>(i)];
    const auto noise_seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), SeedStream::kNoise);
    std::mt19937_64 noise_mid(fork_seed(noise_seed, 0xE1ull));
    std::mt19937_64 noise_arr(fork_seed(noise_seed, 0xE2ull));
    std::mt19937_64 policy(fork_seed(
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i), SeedStream::kPolicy), 0xE3ull));

    auto obs_mid = sensing::observe(h.state, cfg.vessel, mid_sensor, noise_mid, 0);
    auto obs_arr = sensing::observe(h.state, cfg.vessel, arr_sensor, noise_arr, 0);
    AgentMemory mem;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double duty = 0.0;
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(n_days) * spd; ++t) {
      // Day-scale random duty cycle: the rollout sweeps cold, warm and hot
      // regimes instead of pegging at the thermostat cutoff.
      if (t % spd == 0) duty = 0.35 * u01(policy);
      const int action = u01(policy) < duty ? 1 : 0;
      const double vol = draw_at(h, t);
      const auto r = vessel::step(h.state, cfg.vessel, {action == 1, vol});
      auto next_mid = sensing::observe(r.next_state, cfg.vessel, mid_sensor, noise_mid, t + 1);
      auto next_arr = sensing::observe(r.next_state, cfg.vessel, arr_sensor, noise_arr, t + 1);
      if (is_heldout_sample(i, static_cast<std::uint64_t>(t), cfg.heldout_fraction)) {
        eval.midpoint.samples.push_back(model::TransitionSample{
            obs_mid, action, vol, next_mid, i, mem.time_since_reheat, mem.vol_since_reheat});
        eval.array.samples.push_back(model::TransitionSample{
            obs_arr, action, vol, next_arr, i, mem.time_since_reheat, mem.vol_since_reheat});
      }
      mem.update(action, vol);
      h.state = std::move(r.next_state);
      obs_mid = std::move(next_mid);
      obs_arr = std::move(next_arr);
    }
  }
  return eval;
}

double common_eval_mae(const StrategyDetail& detail, const EvalSets& eval) {
  if (detail.models.empty()) throw std::invalid_argument("strategy has no fitted model");
  const int k = detail.models.front().sensor_count;
  const auto& ds = k == eval.midpoint.sensor_count ? eval.midpoint : eval.array;
  if (ds.sensor_count != k) throw std::invalid_argument("no matching evaluation set");
  double sum = 0.0;
  int count = 0;
  for (const auto& m : detail.models) {
    if (!m.fitted()) continue;
    sum += model::evaluate_mae(m, ds);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("strategy has no fitted model");
  return sum / count;
}

}  // namespace tankfleet::harness
