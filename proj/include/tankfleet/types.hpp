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

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace tankfleet {

using Eigen::ArrayXd;

/// A hot water draw delivered below this temperature counts as a comfort
/// violation. This is the ground-truth metric threshold, distinct from the
/// planner's (configurable) comfort target.
inline constexpr double kComfortTempC = 45.0;

inline constexpr double kSecondsPerDay = 86400.0;

/// Upper bound on sensors per observation; sized for O(10)-layer vessels and
/// used for fixed stack buffers in the prediction/planning hot paths.
inline constexpr int kMaxSensors = 32;

/// Number of simulation steps per simulated day for a given step length.
/// Throws std::invalid_argument unless dt divides a day evenly.
inline int steps_per_day(double dt_s) {
  if (!(dt_s > 0)) throw std::invalid_argument("dt_s must be positive");
  const double steps = kSecondsPerDay / dt_s;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 || rounded < 1) {
    throw std::invalid_argument("dt_s must divide a day evenly");
  }
  return static_cast<int>(rounded);
}

/// Per-agent running summary of its own actuation history. These are the
/// engineered "domain knowledge" features: they proxy the hidden thermal
/// state that a sparse sensor cannot see.
struct AgentMemory {
  double time_since_reheat = 0.0;  // steps since the heater was last on
  double vol_since_reheat = 0.0;   // liters drawn since then

  void update(int action, double draw_volume_l) {
    if (action != 0) {
      time_since_reheat = 0.0;
      vol_since_reheat = 0.0;
    } else {
      time_since_reheat += 1.0;
      vol_since_reheat += draw_volume_l;
    }
  }
};

}  // namespace tankfleet
