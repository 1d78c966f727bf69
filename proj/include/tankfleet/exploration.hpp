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
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tankfleet/types.hpp"

namespace tankfleet::explore {

/// Discretization of the observation space. The per-sensor axis index is the
/// absolute lower-inclusive bin floor(T / width), clamped to the index range
/// of [temp_min, temp_max]; multi-sensor ids compose axis indices in a fixed
/// radix, so a single-sensor bin id equals its axis index.
struct StateBinning {
  double temp_bin_width_c = 5.0;
  double temp_min_c = 10.0;
  double temp_max_c = 90.0;
  std::vector<double> volume_class_edges{0.0, 10.0, 30.0};  // config symmetry with the model
  int sensor_count = 1;

  int axis_lo() const;
  int axis_hi() const;
  std::int64_t total_bins() const;  // (axis size)^sensor_count
  void validate() const;
};

std::int64_t bin_of(const ArrayXd& obs_temps, const StateBinning& binning);

/// All bin ids whose axis indices are non-decreasing bottom->top, i.e. the
/// bins a stratified vessel can actually produce (modulo sensor noise).
std::vector<std::int64_t> reachable_bins(const StateBinning& binning);

struct VisitCounts {
  std::unordered_map<std::int64_t, std::uint64_t> counts;
  std::uint64_t total_visits = 0;

  void record(std::int64_t bin, std::uint64_t n = 1) {
    counts[bin] += n;
    total_visits += n;
  }
  void merge(const VisitCounts& other);
  std::uint64_t count(std::int64_t bin) const {
    auto it = counts.find(bin);
    return it == counts.end() ? 0 : it->second;
  }
};

/// Fraction of bins visited at least once.
double coverage(const VisitCounts& counts, const StateBinning& binning);

/// Count-based novelty: 1/sqrt(n+1).
double novelty_bonus(const VisitCounts& counts, std::int64_t bin);

enum class PolicyKind { kNone, kEpsGreedy, kTargeted };

struct ExplorationPolicy {
  PolicyKind kind = PolicyKind::kNone;
  double epsilon = 0.1;         // EpsGreedy
  double bonus_weight = 3.0;    // Targeted
  const VisitCounts* counts = nullptr;  // shared (pooled) or per-agent view
  std::unordered_set<std::int64_t> target_bins;  // from assign_targets

  void validate() const;
};

/// Pick the executed action. None: the greedy action. EpsGreedy: with
/// probability epsilon a uniformly random action. Targeted: argmax over
/// actions of -rank + bonus_weight * (novelty(predicted bin) + [bin is an
/// assigned target]), where the greedy action has rank 0 and the other rank
/// 1; ties favor the greedy action.
int choose_action(const ExplorationPolicy& policy, int greedy_action,
                  const ArrayXd& next_obs_if_off, const ArrayXd& next_obs_if_on,
                  const StateBinning& binning, std::mt19937_64& rng);

/// Deal the bins of `pooled` (sorted by ascending count, ties by bin id)
/// round-robin across agents. Bins absent from the map are not dealt; seed
/// the map with reachable_bins() at count zero to make unvisited bins
/// assignable.
std::vector<std::vector<std::int64_t>> assign_targets(const VisitCounts& pooled,
                                                      const StateBinning& binning, int n_agents);

}  // namespace tankfleet::explore
