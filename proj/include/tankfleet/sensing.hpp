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
#include <vector>

#include "tankfleet/types.hpp"
#include "tankfleet/vessel.hpp"

namespace tankfleet::sensing {

/// What the agent is allowed to see of the vessel state.
struct SensorConfig {
  enum class Kind { kMidpoint, kArray };
  Kind kind = Kind::kMidpoint;
  int array_k = 4;          // number of sensors for Kind::kArray (>= 2)
  double noise_std_c = 0.25;

  int sensor_count() const { return kind == Kind::kMidpoint ? 1 : array_k; }
  void validate(int n_layers) const;  // throws if array_k out of range
};

struct Observation {
  ArrayXd sensor_temps;
  std::int64_t step_index = 0;
};

/// Layer indices read by the config, bottom to top. Midpoint reads layer
/// floor(n/2); Array(k) reads floor(i*(n-1)/(k-1)) for i = 0..k-1, so the
/// bottom and top layers are always included.
std::vector<int> sensor_layers(const SensorConfig& config, int n_layers);

/// Project the hidden state onto the sensors, add seeded Gaussian noise of
/// noise_std_c (skipped entirely when zero), clip to [inlet, max_temp].
Observation observe(const vessel::VesselState& state, const vessel::VesselParams& params,
                    const SensorConfig& config, std::mt19937_64& noise_rng,
                    std::int64_t step_index);

}  // namespace tankfleet::sensing
