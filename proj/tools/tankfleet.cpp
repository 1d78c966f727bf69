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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tankfleet/config.hpp"
#include "tankfleet/harness.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& strategy, std::uint64_t seed,
            bool seed_set, int days, int households, const std::string& out_dir,
            bool dump_transitions, bool dump_draws, bool dump_models) {
  using namespace tankfleet;
  harness::ExperimentConfig cfg;
  if (!config_path.empty()) {
    harness::apply_config(cfg, harness::parse_config_file(config_path));
  }
  // Flags override the config file.
  if (!strategy.empty()) {
    if (strategy == "all") {
      cfg.strategies = harness::all_strategies();
    } else {
      cfg.strategies = {harness::strategy_from_string(strategy)};
    }
  }
  if (seed_set) cfg.master_seed = seed;
  if (days > 0) cfg.n_days = days;
  if (households > 0) cfg.n_households = households;
  if (dump_transitions) cfg.dump_transitions = true;
  if (dump_draws) cfg.dump_draws = true;
  cfg.validate();

  const auto detail = harness::run_experiment_detail(cfg);
  harness::write_report(detail.report, out_dir);
  if (cfg.dump_transitions) harness::write_transition_dumps(detail, out_dir);
  if (dump_models) harness::write_model_summaries(detail, out_dir);
  if (cfg.dump_draws) {
    const auto draws = harness::household_draws(cfg, cfg.n_days);
    for (std::size_t i = 0; i < draws.size(); ++i) {
      std::ofstream out(std::filesystem::path(out_dir) / ("draws_" + std::to_string(i) + ".csv"),
                        std::ios::binary);
      if (!out) throw std::runtime_error("cannot write draw dump");
      occupants::write_draws_csv(draws[i], out);
    }
  }

  for (const auto& s : detail.report.strategies) {
    std::printf("%-8s energy=%.6g kWh violations=%d coverage=%.6g mae=%.6g\n",
                harness::to_string(s.strategy).c_str(), s.cumulative_energy_kwh, s.violations,
                s.final_coverage, s.final_mae_c);
  }
  std::printf("report written to %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tankfleet: hot-water fleet simulator and experiment harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "simulate the configured strategies and write CSVs");
  std::string config_path;
  std::string strategy;
  std::uint64_t seed = 0;
  int days = 0;
  int households = 0;
  std::string out_dir;
  bool dump_transitions = false;
  bool dump_draws = false;
  bool dump_models = false;
  run->add_option("--config", config_path, "key = value config file");
  run->add_option("--strategy", strategy, "strategy name or 'all'");
  auto* seed_opt = run->add_option("--seed", seed, "master seed");
  run->add_option("--days", days, "simulated days");
  run->add_option("--households", households, "fleet size");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_flag("--dump-transitions", dump_transitions, "write transitions_<hid>.csv");
  run->add_flag("--dump-draws", dump_draws, "write draws_<hid>.csv");
  run->add_flag("--dump-model-summary", dump_models, "write model_<strategy>.txt bin summaries");

  auto* plot = app.add_subcommand("plot-data", "re-emit per-figure CSVs from a run directory");
  std::string in_dir;
  plot->add_option("--in", in_dir, "run directory with summary.csv and daily.csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, strategy, seed, seed_opt->count() > 0, days, households,
                     out_dir, dump_transitions, dump_draws, dump_models);
    }
    tankfleet::harness::write_plot_data(in_dir);
    std::printf("figure data written to %s\n", in_dir.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
