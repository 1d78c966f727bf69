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

#include "tankfleet/occupants.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "tankfleet/seeding.hpp"

namespace tankfleet::occupants {

namespace {

// Circular Gaussian bump over hour-of-day.
double day_bump(double hour, double center, double sigma) {
  double d = std::abs(hour - center);
  d = std::min(d, 24.0 - d);
  return std::exp(-0.5 * (d / sigma) * (d / sigma));
}

constexpr double kJitterAmplitude = 0.1;

}  // namespace

Archetype archetype_from_string(std::string_view name) {
  if (name == "morning_peak") return Archetype::kMorningPeak;
  if (name == "evening_peak") return Archetype::kEveningPeak;
  if (name == "flat") return Archetype::kFlat;
  if (name == "family") return Archetype::kFamily;
  throw std::invalid_argument("unknown archetype: " + std::string(name));
}

std::string to_string(Archetype a) {
  switch (a) {
    case Archetype::kMorningPeak: return "morning_peak";
    case Archetype::kEveningPeak: return "evening_peak";
    case Archetype::kFlat: return "flat";
    case Archetype::kFamily: return "family";
  }
  throw std::logic_error("bad archetype");
}

void HouseholdProfile::validate() const {
  if (base_intensity.size() < 1) throw std::invalid_argument("empty base_intensity");
  if ((base_intensity < 0.0).any() || (base_intensity > 1.0).any()) {
    throw std::invalid_argument("base_intensity entries must lie in [0,1]");
  }
  if (!(activity_persistence >= 0.0 && activity_persistence < 1.0)) {
    throw std::invalid_argument("activity_persistence must lie in [0,1)");
  }
  if (mean_draw_volume_l <= 0) throw std::invalid_argument("mean_draw_volume_l must be positive");
  if (volume_dispersion < 0) throw std::invalid_argument("volume_dispersion must be >= 0");
  if (activity_noise_std < 0) throw std::invalid_argument("activity_noise_std must be >= 0");
}

HouseholdProfile make_profile(Archetype archetype, int household_id, std::uint64_t seed,
                              int steps_per_day) {
  if (steps_per_day < 1) throw std::invalid_argument("steps_per_day must be >= 1");

  HouseholdProfile p;
  p.household_id = household_id;
  p.base_intensity = ArrayXd::Zero(steps_per_day);
  for (int s = 0; s < steps_per_day; ++s) {
    const double hour = (s + 0.5) * 24.0 / steps_per_day;
    double v = 0.0;
    switch (archetype) {
      case Archetype::kMorningPeak:
        v = 0.02 + 0.30 * day_bump(hour, 7.5, 1.25);
        break;
      case Archetype::kEveningPeak:
        v = 0.02 + 0.30 * day_bump(hour, 19.5, 1.5);
        break;
      case Archetype::kFlat:
        v = 0.06;
        break;
      case Archetype::kFamily:
        v = 0.03 + 0.25 * day_bump(hour, 7.5, 1.25) + 0.25 * day_bump(hour, 19.5, 1.5);
        break;
    }
    p.base_intensity[s] = v;
  }
  if (archetype == Archetype::kFamily) p.mean_draw_volume_l = 10.0;

  // One scalar amplitude factor per household: shapes stay identical within
  // an archetype (cross-correlation), levels differ slightly.
  std::mt19937_64 rng(harness::fork_seed(seed, 0x70726F66ull + static_cast<std::uint64_t>(household_id)));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double amp = 1.0 + kJitterAmplitude * u(rng);
  p.base_intensity = (p.base_intensity * amp).cwiseMin(1.0).cwiseMax(0.0);
  p.validate();
  return p;
}

DrawSeries generate_draws(const HouseholdProfile& profile, int n_days, std::uint64_t seed) {
  profile.validate();
  if (n_days < 1) throw std::invalid_argument("n_days must be >= 1");
  const int spd = static_cast<int>(profile.base_intensity.size());

  std::mt19937_64 rng(harness::fork_seed(seed, 0x64726177ull));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  const double sigma_log = profile.volume_dispersion;
  const double mu_log = std::log(profile.mean_draw_volume_l) - 0.5 * sigma_log * sigma_log;

  // Day-scale AR(1) activity multiplier, mean 1, started from its stationary
  // distribution.
  const double rho = profile.activity_persistence;
  const double noise = profile.activity_noise_std;
  double m = 1.0;
  if (noise > 0.0) m = 1.0 + noise / std::sqrt(1.0 - rho * rho) * gauss(rng);

  DrawSeries out;
  for (int day = 0; day < n_days; ++day) {
    if (day > 0 && noise > 0.0) m = 1.0 + rho * (m - 1.0) + noise * gauss(rng);
    const double m_eff = std::max(0.0, m);
    for (int s = 0; s < spd; ++s) {
      const double p = std::clamp(m_eff * profile.base_intensity[s], 0.0, 1.0);
      if (p <= 0.0) continue;
      if (u01(rng) < p) {
        const double vol = std::exp(mu_log + sigma_log * gauss(rng));
        out.push_back(DrawEvent{static_cast<std::int64_t>(day) * spd + s, vol});
      }
    }
  }
  return out;
}

double lag_autocorrelation(const ArrayXd& series, int lag) {
  const auto n = series.size();
  if (lag < 0) throw std::invalid_argument("lag must be >= 0");
  if (n <= lag) throw std::invalid_argument("series shorter than lag");
  const double mean = series.mean();
  double denom = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) denom += (series[t] - mean) * (series[t] - mean);
  if (denom == 0.0) throw std::domain_error("autocorrelation undefined for zero-variance series");
  double numer = 0.0;
  for (Eigen::Index t = lag; t < n; ++t) {
    numer += (series[t] - mean) * (series[t - lag] - mean);
  }
  return numer / denom;
}

ArrayXd daily_totals(const DrawSeries& draws, int n_days, int steps_per_day) {
  ArrayXd totals = ArrayXd::Zero(n_days);
  for (const auto& d : draws) {
    const auto day = d.step_index / steps_per_day;
    if (day >= 0 && day < n_days) totals[day] += d.volume_l;
  }
  return totals;
}

void write_draws_csv(const DrawSeries& draws, std::ostream& out) {
  out << "step_index,volume_l\n";
  char buf[64];
  for (const auto& d : draws) {
    std::snprintf(buf, sizeof(buf), "%lld,%.6g\n", static_cast<long long>(d.step_index),
                  d.volume_l);
    out << buf;
  }
}

}  // namespace tankfleet::occupants
