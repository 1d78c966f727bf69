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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tankfleet/config.hpp"
#include "tankfleet/harness.hpp"

using namespace tankfleet;
using namespace tankfleet::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config(Strategy s, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.strategies = {s};
  cfg.n_households = 3;
  cfg.n_days = 8;
  cfg.master_seed = seed;
  return cfg;
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("derive_seed: deterministic, stream- and id-separated") {
  CHECK(derive_seed(1, 2, SeedStream::kNoise) == derive_seed(1, 2, SeedStream::kNoise));
  std::set<std::uint64_t> seen;
  for (std::uint64_t hid = 0; hid < 10000; ++hid) {
    for (auto s : {SeedStream::kOccupant, SeedStream::kNoise, SeedStream::kPolicy}) {
      CHECK(seen.insert(derive_seed(42, hid, s)).second);
    }
  }
}

TEST_CASE("heldout hash: deterministic and roughly proportional") {
  int held = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const bool h = is_heldout_sample(3, i, 0.2);
    CHECK(h == is_heldout_sample(3, i, 0.2));
    if (h) ++held;
  }
  CHECK(held > 1700);
  CHECK(held < 2300);
  CHECK(!is_heldout_sample(3, 77, 0.0));
}

TEST_CASE("config: parse, apply, unknown keys rejected") {
  const std::string text =
      "# comment line\n"
      "run.n_households = 4\n"
      "vessel.n_layers = 8   # trailing comment\n"
      "rbc.low_c = 52.5\n"
      "run.strategies = rbc, marl_k\n"
      "occupants.archetype_mix = flat, family\n";
  auto kv = parse_key_values(text);
  ExperimentConfig cfg;
  apply_config(cfg, kv);
  CHECK(cfg.n_households == 4);
  CHECK(cfg.vessel.n_layers == 8);
  CHECK(cfg.rbc.low_c == 52.5);
  REQUIRE(cfg.strategies.size() == 2);
  CHECK(cfg.strategies[0] == Strategy::kRbc);
  CHECK(cfg.strategies[1] == Strategy::kMarlK);
  REQUIRE(cfg.archetype_mix.size() == 2);

  ExperimentConfig c2;
  CHECK_THROWS_AS(apply_config(c2, parse_key_values("no.such.key = 1\n")), std::invalid_argument);
  CHECK_THROWS_AS(apply_config(c2, parse_key_values("run.n_days = twelve\n")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_key_values("not a key value line\n"), std::invalid_argument);
}

TEST_CASE("config: MARL with a single household is invalid") {
  auto cfg = small_config(Strategy::kMarlK, 1);
  cfg.n_households = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("run_experiment: RBC with zero-intensity occupants uses no energy") {
  auto cfg = small_config(Strategy::kRbc, 5);
  cfg.occupant_intensity_scale = 0.0;
  cfg.vessel.loss_coeff_w_per_k = 0.0;  // lossless standby
  auto report = run_experiment(cfg);
  REQUIRE(report.strategies.size() == 1);
  CHECK(report.strategies[0].cumulative_energy_kwh == 0.0);
  CHECK(report.strategies[0].violations == 0);
  CHECK(report.strategies[0].logged_samples == static_cast<std::uint64_t>(3 * 8 * 96));
}

TEST_CASE("run_experiment: byte-identical reports under the same master seed") {
  auto cfg = small_config(Strategy::kMarlK, 11);
  auto d1 = fresh_dir("tf_det_1");
  auto d2 = fresh_dir("tf_det_2");
  write_report(run_experiment(cfg), d1);
  write_report(run_experiment(cfg), d2);
  CHECK(slurp(d1 / "summary.csv") == slurp(d2 / "summary.csv"));
  CHECK(slurp(d1 / "daily.csv") == slurp(d2 / "daily.csv"));
}

TEST_CASE("run_experiment: household processing order does not matter") {
  auto cfg = small_config(Strategy::kMarlK, 13);
  auto base = fresh_dir("tf_ord_base");
  write_report(run_experiment(cfg), base);
  cfg.household_order = {2, 0, 1};
  auto perm = fresh_dir("tf_ord_perm");
  write_report(run_experiment(cfg), perm);
  CHECK(slurp(base / "summary.csv") == slurp(perm / "summary.csv"));
  CHECK(slurp(base / "daily.csv") == slurp(perm / "daily.csv"));
}

TEST_CASE("run_experiment: eps 0 equals no exploration") {
  auto cfg = small_config(Strategy::kSarlK, 17);
  cfg.exploration_override = ExplorationKind::kEpsGreedy;
  cfg.epsilon = 0.0;
  auto a = fresh_dir("tf_eps0");
  write_report(run_experiment(cfg), a);
  cfg.exploration_override = ExplorationKind::kNone;
  auto b = fresh_dir("tf_noexp");
  write_report(run_experiment(cfg), b);
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  CHECK(slurp(a / "daily.csv") == slurp(b / "daily.csv"));
}

TEST_CASE("run_experiment: pooled dataset size equals the sum over households") {
  auto cfg = small_config(Strategy::kMarlK, 19);
  auto detail = run_experiment_detail(cfg);
  REQUIRE(detail.details.size() == 1);
  std::size_t total = 0;
  for (const auto& ds : detail.details[0].datasets) total += ds.samples.size();
  CHECK(total == static_cast<std::size_t>(cfg.n_households) * cfg.n_days * 96);
  CHECK(detail.report.strategies[0].logged_samples == total);
  // MARL fits one shared model
  CHECK(detail.details[0].models.size() == 1);
  CHECK(detail.details[0].models[0].fitted());
}

TEST_CASE("run_experiment: daily energies sum to the cumulative aggregate") {
  auto cfg = small_config(Strategy::kSarlK, 23);
  auto report = run_experiment(cfg);
  const auto& s = report.strategies[0];
  double daily_sum = 0;
  int daily_viol = 0;
  for (const auto& d : s.daily) {
    if (d.day >= cfg.warmup_days) {
      daily_sum += d.energy_kwh;
      daily_viol += d.violations;
    }
  }
  CHECK(daily_sum == doctest::Approx(s.cumulative_energy_kwh).epsilon(1e-9));
  CHECK(daily_viol == s.violations);
  double hh_sum = 0;
  for (double e : s.household_energy_kwh) hh_sum += e;
  CHECK(hh_sum == doctest::Approx(s.cumulative_energy_kwh).epsilon(1e-12));
}

TEST_CASE("write_report: empty report yields headers-only files") {
  MetricsReport empty;
  auto dir = fresh_dir("tf_empty");
  write_report(empty, dir);
  CHECK(slurp(dir / "summary.csv") ==
        "strategy,cumulative_energy_kwh,violations,final_coverage,final_mae\n");
  CHECK(slurp(dir / "daily.csv") ==
        "strategy,day,energy_kwh,violations,coverage_pooled,coverage_best,model_mae\n");
}

TEST_CASE("write_report: one summary row per strategy; plot data emitted") {
  ExperimentConfig cfg;
  cfg.strategies = {Strategy::kRbc, Strategy::kSarlK};
  cfg.n_households = 2;
  cfg.n_days = 6;
  cfg.master_seed = 3;
  auto dir = fresh_dir("tf_rows");
  write_report(run_experiment(cfg), dir);
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);  // header + 2 rows
  write_plot_data(dir);
  for (const char* f : {"fig1a.csv", "fig1b.csv", "fig3a.csv", "fig3b.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  const std::string fig1a = slurp(dir / "fig1a.csv");
  CHECK(fig1a.rfind("day,RBC,SARL_K\n", 0) == 0);
  const std::string fig3a = slurp(dir / "fig3a.csv");
  CHECK(fig3a.rfind("strategy,cumulative_energy_kwh\n", 0) == 0);
}

TEST_CASE("build_common_eval: deterministic, both sensor spaces, plenty of samples") {
  ExperimentConfig cfg;
  cfg.strategies = {Strategy::kMarlK};
  cfg.n_households = 4;
  cfg.master_seed = 29;
  auto a = build_common_eval(cfg, 10);
  auto b = build_common_eval(cfg, 10);
  REQUIRE(a.midpoint.samples.size() == b.midpoint.samples.size());
  CHECK(a.midpoint.samples.size() == a.array.samples.size());
  CHECK(a.midpoint.samples.size() >= 500);
  CHECK(a.midpoint.sensor_count == 1);
  CHECK(a.array.sensor_count == 4);
  for (std::size_t i = 0; i < a.midpoint.samples.size(); i += 97) {
    CHECK((a.midpoint.samples[i].obs.sensor_temps == b.midpoint.samples[i].obs.sensor_temps)
              .all());
    CHECK(a.midpoint.samples[i].action == b.midpoint.samples[i].action);
  }
}

TEST_CASE("strategy names round-trip") {
  for (auto s : all_strategies()) {
    CHECK(strategy_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(strategy_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("run_experiment: coverage grows monotonically, pooled dominates best") {
  auto cfg = small_config(Strategy::kMarlK, 37);
  auto report = run_experiment(cfg);
  const auto& daily = report.strategies[0].daily;
  for (std::size_t d = 0; d < daily.size(); ++d) {
    CHECK(daily[d].coverage_pooled >= daily[d].coverage_best);
    if (d > 0) {
      CHECK(daily[d].coverage_pooled >= daily[d - 1].coverage_pooled);
      CHECK(daily[d].coverage_best >= daily[d - 1].coverage_best);
    }
  }
}
