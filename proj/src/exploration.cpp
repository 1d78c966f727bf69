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

#include "tankfleet/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tankfleet::explore {

int StateBinning::axis_lo() const {
  return static_cast<int>(std::floor(temp_min_c / temp_bin_width_c));
}

int StateBinning::axis_hi() const {
  return static_cast<int>(std::floor(temp_max_c / temp_bin_width_c));
}

std::int64_t StateBinning::total_bins() const {
  const std::int64_t axis = axis_hi() - axis_lo() + 1;
  std::int64_t total = 1;
  for (int s = 0; s < sensor_count; ++s) {
    if (__builtin_mul_overflow(total, axis, &total)) {
      throw std::overflow_error("state bin space exceeds 64-bit ids");
    }
  }
  return total;
}

void StateBinning::validate() const {
  if (!(temp_bin_width_c > 0)) throw std::invalid_argument("temp_bin_width_c must be positive");
  if (!(temp_min_c < temp_max_c)) throw std::invalid_argument("temp range empty");
  if (sensor_count < 1) throw std::invalid_argument("sensor_count must be >= 1");
  (void)total_bins();
}

std::int64_t bin_of(const ArrayXd& obs_temps, const StateBinning& binning) {
  if (obs_temps.size() != binning.sensor_count) {
    throw std::invalid_argument("bin_of: sensor count mismatch");
  }
  const int lo = binning.axis_lo();
  const int hi = binning.axis_hi();
  const std::int64_t radix = hi + 1;  // absolute axis indices; 1-sensor id == axis index
  std::int64_t id = 0;
  for (Eigen::Index s = 0; s < obs_temps.size(); ++s) {
    const int raw = static_cast<int>(std::floor(obs_temps[s] / binning.temp_bin_width_c));
    const int idx = std::clamp(raw, lo, hi);
    id = id * radix + idx;
  }
  return id;
}

std::vector<std::int64_t> reachable_bins(const StateBinning& binning) {
  binning.validate();
  const int lo = binning.axis_lo();
  const int hi = binning.axis_hi();
  const std::int64_t radix = hi + 1;
  std::vector<std::int64_t> out;
  std::vector<int> idx(static_cast<std::size_t>(binning.sensor_count), lo);
  // Enumerate non-decreasing index tuples (a stratified profile observed
  // bottom->top cannot produce anything else).
  while (true) {
    std::int64_t id = 0;
    for (int s = 0; s < binning.sensor_count; ++s) id = id * radix + idx[static_cast<std::size_t>(s)];
    out.push_back(id);
    int s = binning.sensor_count - 1;
    while (s >= 0 && idx[static_cast<std::size_t>(s)] == hi) --s;
    if (s < 0) break;
    const int v = idx[static_cast<std::size_t>(s)] + 1;
    for (int t = s; t < binning.sensor_count; ++t) idx[static_cast<std::size_t>(t)] = v;
  }
  return out;
}

void VisitCounts::merge(const VisitCounts& other) {
  for (const auto& [bin, n] : other.counts) {
    counts[bin] += n;
    total_visits += n;
  }
}

double coverage(const VisitCounts& counts, const StateBinning& binning) {
  const std::int64_t total = binning.total_bins();
  if (total == 0) throw std::invalid_argument("coverage: empty bin space");
  std::int64_t visited = 0;
  for (const auto& [bin, n] : counts.counts) {
    if (n > 0) ++visited;
  }
  return static_cast<double>(visited) / static_cast<double>(total);
}

double novelty_bonus(const VisitCounts& counts, std::int64_t bin) {
  return 1.0 / std::sqrt(static_cast<double>(counts.count(bin)) + 1.0);
}

void ExplorationPolicy::validate() const {
  if (kind == PolicyKind::kEpsGreedy && !(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0,1]");
  }
  if (kind == PolicyKind::kTargeted) {
    if (bonus_weight < 0) throw std::invalid_argument("bonus_weight must be >= 0");
    if (counts == nullptr) throw std::invalid_argument("targeted policy needs a counts view");
  }
}

int choose_action(const ExplorationPolicy& policy, int greedy_action,
                  const ArrayXd& next_obs_if_off, const ArrayXd& next_obs_if_on,
                  const StateBinning& binning, std::mt19937_64& rng) {
  policy.validate();
  if (next_obs_if_off.size() != binning.sensor_count ||
      next_obs_if_on.size() != binning.sensor_count) {
    throw std::invalid_argument("choose_action: missing candidate predictions");
  }
  switch (policy.kind) {
    case PolicyKind::kNone:
      return greedy_action;
    case PolicyKind::kEpsGreedy: {
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      if (u01(rng) < policy.epsilon) {
        return (rng() & 1ull) ? 1 : 0;
      }
      return greedy_action;
    }
    case PolicyKind::kTargeted: {
      auto score_of = [&](int a, const ArrayXd& cand) {
        const std::int64_t bin = bin_of(cand, binning);
        double s = (a == greedy_action) ? 0.0 : -1.0;  // planning cost rank
        s += policy.bonus_weight * novelty_bonus(*policy.counts, bin);
        if (policy.target_bins.count(bin) > 0) s += policy.bonus_weight;
        return s;
      };
      const double s_off = score_of(0, next_obs_if_off);
      const double s_on = score_of(1, next_obs_if_on);
      if (s_off == s_on) return greedy_action;
      return s_on > s_off ? 1 : 0;
    }
  }
  throw std::logic_error("bad policy kind");
}

std::vector<std::vector<std::int64_t>> assign_targets(const VisitCounts& pooled,
                                                      const StateBinning& binning, int n_agents) {
  binning.validate();
  if (n_agents < 1) throw std::invalid_argument("assign_targets: n_agents must be >= 1");
  std::vector<std::pair<std::uint64_t, std::int64_t>> bins;
  bins.reserve(pooled.counts.size());
  for (const auto& [bin, n] : pooled.counts) bins.emplace_back(n, bin);
  std::sort(bins.begin(), bins.end());  // ascending count, ties by bin id
  std::vector<std::vector<std::int64_t>> targets(static_cast<std::size_t>(n_agents));
  for (std::size_t i = 0; i < bins.size(); ++i) {
    targets[i % static_cast<std::size_t>(n_agents)].push_back(bins[i].second);
  }
  return targets;
}

}  // namespace tankfleet::explore
