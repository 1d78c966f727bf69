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

#include <optional>

#include "tankfleet/types.hpp"

namespace tankfleet::vessel {

/// Physical description of one stratified storage vessel. Layers are indexed
/// bottom (0) to top (n_layers - 1) and hold equal volumes.
struct VesselParams {
  int n_layers = 10;
  double volume_total_l = 200.0;
  double heater_power_kw = 2.4;
  int heater_layer = 0;
  double inlet_temp_c = 10.0;
  double ambient_temp_c = 20.0;
  double max_temp_c = 90.0;         // thermostat cutoff
  double loss_coeff_w_per_k = 0.25; // per layer, toward ambient
  double cond_coeff_w_per_k = 1.5;  // between adjacent layers
  double specific_heat_kj = 4.186;  // kJ/(kg K)
  double density_kg_per_l = 1.0;
  double dt_s = 900.0;

  double layer_volume_l() const { return volume_total_l / n_layers; }
  /// Heat capacity of one layer in kJ/K.
  double layer_heat_capacity_kj() const {
    return layer_volume_l() * density_kg_per_l * specific_heat_kj;
  }
  /// Electrical energy of one full-power heating step, in kWh.
  double energy_per_on_step_kwh() const { return heater_power_kw * dt_s / 3600.0; }

  /// Throws std::invalid_argument on any violated invariant, including the
  /// explicit-update stability bound dt*(2*cond + loss) <= layer capacity
  /// (guarantees each exchange step is a convex combination, so no layer can
  /// overshoot its neighbors or ambient within one dt).
  void validate() const;
};

/// Full (hidden) vessel state: per-layer temperatures, bottom to top.
struct VesselState {
  ArrayXd layer_temps;
};

struct StepInput {
  bool heat_on = false;
  double draw_volume_l = 0.0;
};

struct StepResult {
  VesselState next_state;
  double energy_used_kwh = 0.0;             // electrical input this step
  std::optional<double> delivered_temp_c;   // present iff draw_volume > 0
  double losses_kwh = 0.0;                  // net heat to ambient (signed)
};

VesselState make_uniform_state(const VesselParams& params, double temp_c);

/// Advance one step. Order of effects: plug-flow draw, heating with
/// thermostat clipping, inter-layer conduction + ambient exchange, buoyant
/// mixing of any temperature inversion. Pure function of its arguments.
StepResult step(const VesselState& state, const VesselParams& params, const StepInput& input);

/// Resolve temperature inversions by merging adjacent inverted layers into
/// volume-weighted averages until the profile is non-decreasing bottom->top.
/// Conserves total enthalpy; idempotent.
ArrayXd buoyancy_mix(const ArrayXd& layer_temps, const ArrayXd& layer_volumes);

/// Thermal energy stored above ref_temp_c, in kWh.
double energy_content_kwh(const VesselState& state, const VesselParams& params, double ref_temp_c);

}  // namespace tankfleet::vessel
