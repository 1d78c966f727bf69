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
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "tankfleet/sensing.hpp"
#include "tankfleet/types.hpp"

namespace tankfleet::model {

/// Which pieces of human domain knowledge the learner is allowed to use.
struct KnowledgeConfig {
  bool enabled = false;
  bool engineered_features = false;  // time-since-reheat, vol-since-reheat, mean temp
  bool endpoint_clamp = false;
  bool monotone_profile = false;
  bool standby_non_increasing = false;

  bool any_constraint() const {
    return endpoint_clamp || monotone_profile || standby_non_increasing;
  }
  void validate() const;  // constraints require enabled

  static KnowledgeConfig full() {
    return KnowledgeConfig{true, true, true, true, true};
  }
};

/// One logged transition. time_since_reheat / vol_since_reheat are the
/// agent's memory at the moment the action was chosen; they travel with the
/// sample so pooled or shuffled datasets stay self-contained.
struct TransitionSample {
  sensing::Observation obs;
  int action = 0;
  double draw_volume_l = 0.0;
  sensing::Observation next_obs;
  int household_id = 0;
  double time_since_reheat = 0.0;
  double vol_since_reheat = 0.0;
};

struct TransitionDataset {
  std::vector<TransitionSample> samples;
  int sensor_count = 0;
};

/// Fixed, data-independent bin edges per feature. Temperatures bin at
/// temp_bin_width_c (lower-inclusive, clamped to [temp_min, temp_max]);
/// draw volume uses the classes {0}, (e0,e1], (e1,e2], >e2; the engineered
/// features use four lower-inclusive classes each.
struct FeatureBinning {
  double temp_bin_width_c = 5.0;
  double temp_min_c = 10.0;
  double temp_max_c = 90.0;
  std::vector<double> volume_class_edges{0.0, 5.0, 10.0, 20.0, 30.0, 50.0};
  std::vector<double> time_since_reheat_edges{4.0, 16.0, 48.0};
  std::vector<double> vol_since_reheat_edges{10.0, 30.0, 80.0};
  std::vector<double> mean_temp_edges{30.0, 50.0, 70.0};

  void validate() const;
  int temp_axis_size() const;
  int temp_bin(double t) const;        // normalized to 0..temp_axis_size()-1
  int volume_class(double v) const;    // 0..volume_class_edges.size()
  static int class_of(double v, const std::vector<double>& edges);
};

/// Tabular delta model: per feature-bin count and mean observation delta.
struct TransitionModel {
  struct BinStats {
    std::uint64_t count = 0;
    ArrayXd sum_delta;   // per sensor
    ArrayXd mean_delta;  // sum_delta / count, finalized by fit
  };

  FeatureBinning binning;
  KnowledgeConfig knowledge;
  int sensor_count = 0;

  std::unordered_map<std::int64_t, BinStats> bin_stats;

  // Populated bins sorted by id, with decoded per-feature indices; this is
  // the search structure for the nearest-populated-bin fallback.
  std::vector<std::int64_t> populated_ids;
  Eigen::MatrixXi populated_indices;  // populated x feature_count

  int feature_count() const;
  std::vector<std::int64_t> feature_radices() const;

  bool fitted() const { return !bin_stats.empty(); }

  // Memo of fallback resolutions (miss bin id -> populated bin id). Guarded
  // so a fitted model can be shared read-only across threads.
  struct FallbackMemo {
    std::mutex mutex;
    std::unordered_map<std::int64_t, std::int64_t> resolved;
  };
  std::shared_ptr<FallbackMemo> fallback_memo = std::make_shared<FallbackMemo>();
};

/// Feature vector layout: sensor temps..., action, draw volume, then (with
/// engineered features) time-since-reheat, vol-since-reheat, mean sensor temp.
ArrayXd featurize(const ArrayXd& obs_temps, int action, double draw_volume_l,
                  const KnowledgeConfig& knowledge, const AgentMemory& memory);

/// Discretize every sample and store per-bin count and mean next-minus-current
/// delta per sensor. Throws on an empty dataset.
TransitionModel fit(const TransitionDataset& dataset, const KnowledgeConfig& knowledge,
                    const FeatureBinning& binning);

/// Predict the next observation: current temps plus the query bin's stored
/// mean delta, then constraint projection when knowledge is enabled. When
/// the query bin is empty, the nearest populated bin by L1 index distance
/// answers instead, searched among bins with the same action (all bins only
/// if none match); ties resolve to the lowest bin id. Throws if the model
/// has no populated bins.
ArrayXd predict(const TransitionModel& fitted, const ArrayXd& obs_temps, int action,
                double draw_volume_l, const AgentMemory& memory);

/// Zero-allocation variant for planner rollouts: obs and out point at
/// sensor_count doubles (obs == out is allowed).
void predict_into(const TransitionModel& fitted, const double* obs_temps, int action,
                  double draw_volume_l, const AgentMemory& memory, double* out);

/// Apply the enabled thermodynamic constraints to a raw prediction:
/// clip to [inlet, max], L2-project onto non-decreasing profiles, and (when
/// the heater was off) cap each sensor at its previous observed value.
ArrayXd project_constraints(const ArrayXd& pred, const KnowledgeConfig& knowledge, int action,
                            const ArrayXd& prev_obs, double inlet_temp_c, double max_temp_c);

/// Concatenate datasets (household provenance kept). Sensor counts must match.
TransitionDataset pool(const std::vector<TransitionDataset>& datasets);

/// Mean absolute error over samples and sensors, in degC.
double evaluate_mae(const TransitionModel& fitted, const TransitionDataset& heldout);

/// Human-readable dump: bin space size, populated bins, per-bin counts.
std::string model_summary(const TransitionModel& fitted);

/// CSV: household_id, step, obs..., action, draw_volume, next_obs...,
/// time_since_reheat, vol_since_reheat.
void write_dataset_csv(const TransitionDataset& dataset, std::ostream& out);

}  // namespace tankfleet::model
