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
#include <string>
#include <string_view>
#include <vector>

#include "tankfleet/types.hpp"

namespace tankfleet::occupants {

enum class Archetype { kMorningPeak, kEveningPeak, kFlat, kFamily };

Archetype archetype_from_string(std::string_view name);  // throws on unknown
std::string to_string(Archetype a);

/// Stochastic draw process of one household. Occurrence per step is Bernoulli
/// with probability clip(m_d * base_intensity[slot], 0, 1) where m_d is a
/// day-scale AR(1) activity multiplier with mean 1; volumes are log-normal.
struct HouseholdProfile {
  int household_id = 0;
  ArrayXd base_intensity;            // per time-of-day slot, in [0,1]
  double mean_draw_volume_l = 8.0;
  double volume_dispersion = 0.4;    // std of log volume
  double activity_persistence = 0.7; // AR(1) coefficient in [0,1)
  double activity_noise_std = 0.3;

  void validate() const;
};

struct DrawEvent {
  std::int64_t step_index = 0;
  double volume_l = 0.0;
};

/// Strictly increasing step indices, positive volumes.
using DrawSeries = std::vector<DrawEvent>;

/// Build a household profile from a shared archetype template. All households
/// of one archetype share the time-of-day shape (this is what makes the fleet
/// cross-correlated); the seeded per-household jitter is a scalar amplitude
/// factor so shapes stay identical and a flat template stays flat.
HouseholdProfile make_profile(Archetype archetype, int household_id, std::uint64_t seed,
                              int steps_per_day = 96);

DrawSeries generate_draws(const HouseholdProfile& profile, int n_days, std::uint64_t seed);

/// Sample autocorrelation of `series` at `lag`. Throws std::domain_error on a
/// zero-variance series.
double lag_autocorrelation(const ArrayXd& series, int lag);

/// Total drawn volume per day, length n_days.
ArrayXd daily_totals(const DrawSeries& draws, int n_days, int steps_per_day);

/// CSV export: header then one `step_index,volume_l` row per event.
void write_draws_csv(const DrawSeries& draws, std::ostream& out);

}  // namespace tankfleet::occupants
