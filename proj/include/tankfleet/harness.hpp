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
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tankfleet/control.hpp"
#include "tankfleet/exploration.hpp"
#include "tankfleet/model_learning.hpp"
#include "tankfleet/occupants.hpp"
#include "tankfleet/seeding.hpp"
#include "tankfleet/sensing.hpp"
#include "tankfleet/types.hpp"
#include "tankfleet/vessel.hpp"

namespace tankfleet::harness {

enum class Strategy { kRbc, kSarlK, kMarlK, kSarlKI, kMarlKI };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);  // throws on unknown
bool is_marl(Strategy s);
bool uses_planner(Strategy s);
bool uses_array_sensor(Strategy s);
std::vector<Strategy> all_strategies();

enum class ExplorationKind { kDefault, kNone, kEpsGreedy, kTargeted };

struct ExperimentConfig {
  std::vector<Strategy> strategies = all_strategies();
  int n_households = 10;
  int n_days = 90;
  std::uint64_t master_seed = 1;
  int model_refresh_days = 1;
  double heldout_fraction = 0.2;
  int warmup_days = 3;  // excluded from energy/violation aggregates
  double warm_start_temp_c = 60.0;

  vessel::VesselParams vessel{};
  std::vector<occupants::Archetype> archetype_mix{
      occupants::Archetype::kFamily, occupants::Archetype::kMorningPeak,
      occupants::Archetype::kEveningPeak, occupants::Archetype::kFlat};
  double occupant_intensity_scale = 1.0;  // 0 disables draws entirely

  double sensor_noise_std_c = 0.25;
  int array_k = 4;
  double temp_bin_width_c = 5.0;

  control::RbcConfig rbc{};
  control::PlannerConfig planner{/*horizon=*/16, /*comfort_threshold_c=*/47.0,
                                 /*comfort_weight=*/10.0, /*switch_limit=*/2,
                                 /*energy_per_on_step_kwh=*/0.6};
  // Floor on the per-slot expected volume fed to the planner: a stochastic
  // occupant's expected draw is never exactly zero, so comfort is defended
  // at every step, not only at slots already seen in the history.
  double forecast_floor_l = 0.05;

  // Default exploration is per strategy (SARL: eps-greedy on own counts,
  // MARL: targeted on pooled counts); kDefault keeps that, anything else
  // overrides it for every planner strategy.
  ExplorationKind exploration_override = ExplorationKind::kDefault;
  double epsilon = 0.1;
  double bonus_weight = 8.0;
  int safety_lookahead_steps = 4;
  // Candidate observations for the targeted-exploration score are the
  // model's constant-action rollout endpoints over this many steps. One-step
  // candidates cannot express bottom-up heating under sparse sensing (the
  // mid sensor only moves once the heated block reaches it), which starves
  // the novelty signal.
  int exploration_lookahead_steps = 12;

  bool dump_transitions = false;
  bool dump_draws = false;

  // Processing order of households (empty = by id). Results must not depend
  // on it; exposed so tests can verify that.
  std::vector<int> household_order;

  sensing::SensorConfig sensor_for(Strategy s) const;
  model::FeatureBinning feature_binning() const;
  explore::StateBinning state_binning(int sensor_count) const;
  void validate() const;
};

struct DailyMetrics {
  int day = 0;
  double energy_kwh = 0.0;       // fleet total for the day
  int violations = 0;            // fleet total for the day
  double coverage_pooled = 0.0;  // union over households
  double coverage_best = 0.0;    // best single household
  double model_mae_c = std::numeric_limits<double>::quiet_NaN();  // own held-out
};

struct StrategyMetrics {
  Strategy strategy = Strategy::kRbc;
  std::vector<DailyMetrics> daily;
  // Aggregates over evaluation days (warmup excluded).
  double cumulative_energy_kwh = 0.0;
  int violations = 0;
  double final_coverage = 0.0;  // headline: pooled for MARL/RBC, best single for SARL
  double final_mae_c = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> household_energy_kwh;
  std::vector<int> household_violations;
  std::uint64_t logged_samples = 0;

  double headline_coverage(int day) const;
};

struct MetricsReport {
  int n_households = 0;
  int n_days = 0;
  int warmup_days = 0;
  std::vector<StrategyMetrics> strategies;
};

/// Everything a post-hoc analysis needs beyond the metrics: final models,
/// per-household logged datasets, and visitation counts.
struct StrategyDetail {
  Strategy strategy = Strategy::kRbc;
  std::vector<model::TransitionModel> models;  // SARL: one per household; else one
  std::vector<model::TransitionDataset> datasets;
  explore::VisitCounts pooled_counts;
  std::vector<explore::VisitCounts> agent_counts;
};

struct RunDetail {
  MetricsReport report;
  std::vector<StrategyDetail> details;  // parallel to report.strategies
};

MetricsReport run_experiment(const ExperimentConfig& cfg);
RunDetail run_experiment_detail(const ExperimentConfig& cfg);

/// The per-household draw series the experiment will use (archetypes cycled
/// over the mix, seeds derived from the master seed).
std::vector<occupants::DrawSeries> household_draws(const ExperimentConfig& cfg, int n_days);

/// Deterministic train/held-out split shared by every strategy: hash of
/// (household id, per-household sample index).
bool is_heldout_sample(int household_id, std::uint64_t sample_index, double heldout_fraction);

/// Strategy-independent evaluation data: a fleet rollout driven by uniformly
/// random actuation (same occupant draws as the experiment), observed under
/// both sensor configurations, subsampled by the held-out hash.
struct EvalSets {
  model::TransitionDataset midpoint;
  model::TransitionDataset array;
};
EvalSets build_common_eval(const ExperimentConfig& cfg, int n_days = 30);

/// MAE of a strategy's final model(s) on the matching common evaluation set
/// (mean over household models for SARL strategies).
double common_eval_mae(const StrategyDetail& detail, const EvalSets& eval);

/// Write summary.csv and daily.csv (stable column order, 6 significant
/// digits); with cfg dump flags, also transitions_<hid>.csv / draws_<hid>.csv.
void write_report(const MetricsReport& report, const std::filesystem::path& out_dir);
void write_transition_dumps(const RunDetail& detail, const std::filesystem::path& out_dir);

/// Text dump of every fitted model (bin space, populated bins, per-bin counts).
void write_model_summaries(const RunDetail& detail, const std::filesystem::path& out_dir);

/// Re-emit per-figure CSVs (fig1a/fig1b/fig3a/fig3b) from a run directory
/// containing summary.csv and daily.csv.
void write_plot_data(const std::filesystem::path& run_dir);

}  // namespace tankfleet::harness
