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

#include "tankfleet/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tankfleet::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config key '" + key + "': bad boolean '" + v + "'");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void apply_config(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv) {
  using Handler = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Handler> handlers{
      {"run.strategies",
       [&](const std::string& k, const std::string& v) {
         cfg.strategies.clear();
         if (v == "all") {
           cfg.strategies = all_strategies();
           return;
         }
         for (const auto& name : split_list(v)) cfg.strategies.push_back(strategy_from_string(name));
         if (cfg.strategies.empty()) throw std::invalid_argument("config key '" + k + "': empty");
       }},
      {"run.n_households",
       [&](const std::string& k, const std::string& v) { cfg.n_households = static_cast<int>(parse_int(k, v)); }},
      {"run.n_days",
       [&](const std::string& k, const std::string& v) { cfg.n_days = static_cast<int>(parse_int(k, v)); }},
      {"run.seed",
       [&](const std::string& k, const std::string& v) {
         cfg.master_seed = static_cast<std::uint64_t>(parse_int(k, v));
       }},
      {"run.model_refresh_days",
       [&](const std::string& k, const std::string& v) {
         cfg.model_refresh_days = static_cast<int>(parse_int(k, v));
       }},
      {"run.heldout_fraction",
       [&](const std::string& k, const std::string& v) { cfg.heldout_fraction = parse_double(k, v); }},
      {"run.warmup_days",
       [&](const std::string& k, const std::string& v) { cfg.warmup_days = static_cast<int>(parse_int(k, v)); }},
      {"run.warm_start_temp_c",
       [&](const std::string& k, const std::string& v) { cfg.warm_start_temp_c = parse_double(k, v); }},
      {"run.dump_transitions",
       [&](const std::string& k, const std::string& v) { cfg.dump_transitions = parse_bool(k, v); }},
      {"run.dump_draws",
       [&](const std::string& k, const std::string& v) { cfg.dump_draws = parse_bool(k, v); }},
      {"vessel.n_layers",
       [&](const std::string& k, const std::string& v) { cfg.vessel.n_layers = static_cast<int>(parse_int(k, v)); }},
      {"vessel.volume_total_l",
       [&](const std::string& k, const std::string& v) { cfg.vessel.volume_total_l = parse_double(k, v); }},
      {"vessel.heater_power_kw",
       [&](const std::string& k, const std::string& v) { cfg.vessel.heater_power_kw = parse_double(k, v); }},
      {"vessel.heater_layer",
       [&](const std::string& k, const std::string& v) { cfg.vessel.heater_layer = static_cast<int>(parse_int(k, v)); }},
      {"vessel.inlet_temp_c",
       [&](const std::string& k, const std::string& v) { cfg.vessel.inlet_temp_c = parse_double(k, v); }},
      {"vessel.ambient_temp_c",
       [&](const std::string& k, const std::string& v) { cfg.vessel.ambient_temp_c = parse_double(k, v); }},
      {"vessel.max_temp_c",
       [&](const std::string& k, const std::string& v) { cfg.vessel.max_temp_c = parse_double(k, v); }},
      {"vessel.loss_coeff_w_per_k",
       [&](const std::string& k, const std::string& v) { cfg.vessel.loss_coeff_w_per_k = parse_double(k, v); }},
      {"vessel.cond_coeff_w_per_k",
       [&](const std::string& k, const std::string& v) { cfg.vessel.cond_coeff_w_per_k = parse_double(k, v); }},
      {"vessel.specific_heat_kj",
       [&](const std::string& k, const std::string& v) { cfg.vessel.specific_heat_kj = parse_double(k, v); }},
      {"vessel.density_kg_per_l",
       [&](const std::string& k, const std::string& v) { cfg.vessel.density_kg_per_l = parse_double(k, v); }},
      {"vessel.dt_s",
       [&](const std::string& k, const std::string& v) { cfg.vessel.dt_s = parse_double(k, v); }},
      {"occupants.archetype_mix",
       [&](const std::string& k, const std::string& v) {
         cfg.archetype_mix.clear();
         for (const auto& name : split_list(v)) {
           cfg.archetype_mix.push_back(occupants::archetype_from_string(name));
         }
         if (cfg.archetype_mix.empty()) throw std::invalid_argument("config key '" + k + "': empty");
       }},
      {"occupants.intensity_scale",
       [&](const std::string& k, const std::string& v) {
         cfg.occupant_intensity_scale = parse_double(k, v);
       }},
      {"sensing.noise_std_c",
       [&](const std::string& k, const std::string& v) { cfg.sensor_noise_std_c = parse_double(k, v); }},
      {"sensing.array_k",
       [&](const std::string& k, const std::string& v) { cfg.array_k = static_cast<int>(parse_int(k, v)); }},
      {"binning.temp_bin_width_c",
       [&](const std::string& k, const std::string& v) { cfg.temp_bin_width_c = parse_double(k, v); }},
      {"rbc.low_c",
       [&](const std::string& k, const std::string& v) { cfg.rbc.low_c = parse_double(k, v); }},
      {"rbc.high_c",
       [&](const std::string& k, const std::string& v) { cfg.rbc.high_c = parse_double(k, v); }},
      {"planner.horizon_steps",
       [&](const std::string& k, const std::string& v) { cfg.planner.horizon = static_cast<int>(parse_int(k, v)); }},
      {"planner.comfort_threshold_c",
       [&](const std::string& k, const std::string& v) { cfg.planner.comfort_threshold_c = parse_double(k, v); }},
      {"planner.comfort_weight",
       [&](const std::string& k, const std::string& v) { cfg.planner.comfort_weight = parse_double(k, v); }},
      {"planner.forecast_floor_l",
       [&](const std::string& k, const std::string& v) { cfg.forecast_floor_l = parse_double(k, v); }},
      {"planner.switch_limit",
       [&](const std::string& k, const std::string& v) { cfg.planner.switch_limit = static_cast<int>(parse_int(k, v)); }},
      {"exploration.kind",
       [&](const std::string& k, const std::string& v) {
         if (v == "default") cfg.exploration_override = ExplorationKind::kDefault;
         else if (v == "none") cfg.exploration_override = ExplorationKind::kNone;
         else if (v == "eps_greedy") cfg.exploration_override = ExplorationKind::kEpsGreedy;
         else if (v == "targeted") cfg.exploration_override = ExplorationKind::kTargeted;
         else throw std::invalid_argument("config key '" + k + "': unknown kind '" + v + "'");
       }},
      {"exploration.epsilon",
       [&](const std::string& k, const std::string& v) { cfg.epsilon = parse_double(k, v); }},
      {"exploration.bonus_weight",
       [&](const std::string& k, const std::string& v) { cfg.bonus_weight = parse_double(k, v); }},
      {"exploration.lookahead_steps",
       [&](const std::string& k, const std::string& v) {
         cfg.exploration_lookahead_steps = static_cast<int>(parse_int(k, v));
       }},
      {"exploration.safety_lookahead_steps",
       [&](const std::string& k, const std::string& v) {
         cfg.safety_lookahead_steps = static_cast<int>(parse_int(k, v));
       }},
  };

  for (const auto& [key, value] : kv) {
    auto it = handlers.find(key);
    if (it == handlers.end()) throw std::invalid_argument("unknown config key '" + key + "'");
    it->second(key, value);
  }
}

}  // namespace tankfleet::harness
