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

#include "tankfleet/vessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tankfleet/isotonic.hpp"

namespace tankfleet::vessel {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Overlap length of [a0, a1) and [b0, b1).
double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

void VesselParams::validate() const {
  require(n_layers >= 1, "n_layers must be >= 1");
  require(volume_total_l > 0, "volume_total_l must be positive");
  require(heater_power_kw > 0, "heater_power_kw must be positive");
  require(heater_layer >= 0 && heater_layer < n_layers, "heater_layer out of range");
  require(specific_heat_kj > 0, "specific_heat_kj must be positive");
  require(density_kg_per_l > 0, "density_kg_per_l must be positive");
  require(dt_s > 0, "dt_s must be positive");
  require(loss_coeff_w_per_k >= 0, "loss_coeff_w_per_k must be >= 0");
  require(cond_coeff_w_per_k >= 0, "cond_coeff_w_per_k must be >= 0");
  require(inlet_temp_c < max_temp_c, "inlet_temp_c must be below max_temp_c");
  // Ambient exchange drags layers toward ambient; keeping ambient inside the
  // operating range is what keeps every layer inside [inlet, max] on standby.
  require(ambient_temp_c >= inlet_temp_c && ambient_temp_c <= max_temp_c,
          "ambient_temp_c must lie in [inlet_temp_c, max_temp_c]");
  // Explicit-update stability: the per-layer update must stay a convex
  // combination of itself, its neighbors and ambient.
  const double exchange_kj_per_k =
      dt_s * (2.0 * cond_coeff_w_per_k + loss_coeff_w_per_k) / 1000.0;
  require(exchange_kj_per_k <= layer_heat_capacity_kj(),
          "conduction/loss coefficients too large for dt (explicit update unstable)");
}

VesselState make_uniform_state(const VesselParams& params, double temp_c) {
  params.validate();
  require(temp_c >= params.inlet_temp_c && temp_c <= params.max_temp_c,
          "initial temperature outside [inlet, max]");
  return VesselState{ArrayXd::Constant(params.n_layers, temp_c)};
}

ArrayXd buoyancy_mix(const ArrayXd& layer_temps, const ArrayXd& layer_volumes) {
  if (layer_temps.size() != layer_volumes.size()) {
    throw std::invalid_argument("buoyancy_mix: length mismatch");
  }
  if ((layer_volumes <= 0.0).any()) {
    throw std::invalid_argument("buoyancy_mix: volumes must be positive");
  }
  // Inversion pooling is exactly the weighted non-decreasing projection.
  return isotonic_non_decreasing(layer_temps, layer_volumes);
}

double energy_content_kwh(const VesselState& state, const VesselParams& params,
                          double ref_temp_c) {
  const double cap = params.layer_heat_capacity_kj();
  double kj = 0.0;
  for (Eigen::Index i = 0; i < state.layer_temps.size(); ++i) {
    kj += cap * (state.layer_temps[i] - ref_temp_c);
  }
  return kj / 3600.0;
}

StepResult step(const VesselState& state, const VesselParams& params, const StepInput& input) {
  params.validate();
  const int n = params.n_layers;
  if (state.layer_temps.size() != n) throw std::invalid_argument("state size mismatch");
  if (!state.layer_temps.isFinite().all()) throw std::domain_error("non-finite temperature");
  if (input.draw_volume_l < 0) throw std::invalid_argument("draw_volume_l must be >= 0");
  if (input.draw_volume_l > params.volume_total_l) {
    throw std::invalid_argument("draw_volume_l exceeds vessel volume");
  }

  const double layer_vol = params.layer_volume_l();
  const double cap = params.layer_heat_capacity_kj();  // kJ/K per layer

  ArrayXd temps = state.layer_temps;
  StepResult result;

  // 1) Plug-flow draw: the drawn slug leaves from the top, everything shifts
  // up, inlet water enters at the bottom. Positions are in liters from the
  // bottom; layer j spans [j*V, (j+1)*V).
  const double draw = input.draw_volume_l;
  if (draw > 0.0) {
    const double total = params.volume_total_l;
    double delivered_kj_per_unit = 0.0;  // sum of overlap * T over drawn slices
    for (int j = 0; j < n; ++j) {
      const double ov = overlap(total - draw, total, j * layer_vol, (j + 1) * layer_vol);
      if (ov > 0.0) delivered_kj_per_unit += ov * temps[j];
    }
    result.delivered_temp_c = delivered_kj_per_unit / draw;

    ArrayXd shifted(n);
    for (int i = 0; i < n; ++i) {
      const double lo = i * layer_vol - draw;
      const double hi = lo + layer_vol;
      double acc = overlap(lo, hi, -total, 0.0) * params.inlet_temp_c;
      for (int j = 0; j < n; ++j) {
        const double ov = overlap(lo, hi, j * layer_vol, (j + 1) * layer_vol);
        if (ov > 0.0) acc += ov * temps[j];
      }
      shifted[i] = acc / layer_vol;
    }
    temps = std::move(shifted);
  }

  // 2) Heating with thermostat cutoff: clip the deposit so the heater layer
  // cannot exceed max_temp; energy_used reflects the clipping.
  if (input.heat_on && temps[params.heater_layer] < params.max_temp_c) {
    const double full_dt = params.heater_power_kw * params.dt_s / cap;  // K
    const double applied_dt = std::min(full_dt, params.max_temp_c - temps[params.heater_layer]);
    temps[params.heater_layer] += applied_dt;
    result.energy_used_kwh = cap * applied_dt / 3600.0;
  }

  // 3) Explicit conduction between neighbors and exchange with ambient. The
  // loss bookkeeping reuses the applied deltas so the energy balance is
  // consistent to rounding.
  if (params.cond_coeff_w_per_k > 0.0 || params.loss_coeff_w_per_k > 0.0) {
    const double a = params.dt_s * params.cond_coeff_w_per_k / 1000.0 / cap;
    const double b = params.dt_s * params.loss_coeff_w_per_k / 1000.0 / cap;
    ArrayXd next(n);
    double losses_kj = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = 0.0;
      if (i + 1 < n) d += a * (temps[i + 1] - temps[i]);
      if (i > 0) d += a * (temps[i - 1] - temps[i]);
      const double loss_dt = b * (temps[i] - params.ambient_temp_c);
      losses_kj += cap * loss_dt;
      next[i] = temps[i] + d - loss_dt;
    }
    temps = std::move(next);
    result.losses_kwh = losses_kj / 3600.0;
  }

  // 4) Buoyant resolution of any inversion.
  result.next_state.layer_temps =
      buoyancy_mix(temps, ArrayXd::Constant(n, layer_vol));

  if (!result.next_state.layer_temps.isFinite().all()) {
    throw std::domain_error("non-finite temperature after step");
  }
  return result;
}

}  // namespace tankfleet::vessel
