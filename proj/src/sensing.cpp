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

#include "tankfleet/sensing.hpp"

#include <algorithm>
#include <stdexcept>

namespace tankfleet::sensing {

void SensorConfig::validate(int n_layers) const {
  if (noise_std_c < 0) throw std::invalid_argument("noise_std_c must be >= 0");
  if (kind == Kind::kArray) {
    if (array_k < 2) throw std::invalid_argument("array sensor needs k >= 2");
    if (array_k > n_layers) throw std::invalid_argument("array_k exceeds n_layers");
  }
}

std::vector<int> sensor_layers(const SensorConfig& config, int n_layers) {
  config.validate(n_layers);
  if (config.kind == SensorConfig::Kind::kMidpoint) {
    return {n_layers / 2};
  }
  std::vector<int> layers(config.array_k);
  for (int i = 0; i < config.array_k; ++i) {
    layers[i] = static_cast<int>(static_cast<std::int64_t>(i) * (n_layers - 1) / (config.array_k - 1));
  }
  return layers;
}

Observation observe(const vessel::VesselState& state, const vessel::VesselParams& params,
                    const SensorConfig& config, std::mt19937_64& noise_rng,
                    std::int64_t step_index) {
  const auto layers = sensor_layers(config, params.n_layers);
  Observation obs;
  obs.step_index = step_index;
  obs.sensor_temps = ArrayXd(static_cast<Eigen::Index>(layers.size()));
  if (config.noise_std_c > 0.0) {
    std::normal_distribution<double> gauss(0.0, config.noise_std_c);
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const double raw = state.layer_temps[layers[i]] + gauss(noise_rng);
      obs.sensor_temps[static_cast<Eigen::Index>(i)] =
          std::clamp(raw, params.inlet_temp_c, params.max_temp_c);
    }
  } else {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      obs.sensor_temps[static_cast<Eigen::Index>(i)] = state.layer_temps[layers[i]];
    }
  }
  return obs;
}

}  // namespace tankfleet::sensing
