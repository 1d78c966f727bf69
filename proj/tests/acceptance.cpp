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
//
// Acceptance suite: runs every gated criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "tankfleet/config.hpp"
#include "tankfleet/harness.hpp"
#include "tankfleet/isotonic.hpp"
#include "tankfleet/vessel.hpp"

using namespace tankfleet;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

void criterion_1_physics() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n_steps = 100000;
  int monotone_ok = 0;
  double worst_lossless = 0.0, worst_lossy = 0.0;
  for (int trial = 0; trial < n_steps; ++trial) {
    const bool lossless = trial % 2 == 0;
    vessel::VesselParams p;
    p.n_layers = 1 + static_cast<int>(rng() % 12);
    p.volume_total_l = 50 + 350 * u(rng);
    p.heater_power_kw = 1 + 3 * u(rng);
    p.heater_layer = static_cast<int>(rng() % p.n_layers);
    p.inlet_temp_c = 5 + 10 * u(rng);
    p.max_temp_c = 70 + 25 * u(rng);
    p.ambient_temp_c = p.inlet_temp_c + 10 * u(rng);
    p.dt_s = 300 + 1500 * u(rng);
    if (lossless) {
      p.loss_coeff_w_per_k = 0;
      p.cond_coeff_w_per_k = 0;
    } else {
      const double budget_w = 1000.0 * p.layer_heat_capacity_kj() / p.dt_s / 2.0;
      p.cond_coeff_w_per_k = budget_w * 0.3 * u(rng);
      p.loss_coeff_w_per_k = budget_w * 0.2 * u(rng);
    }
    vessel::VesselState s;
    s.layer_temps = ArrayXd(p.n_layers);
    for (int i = 0; i < p.n_layers; ++i) {
      s.layer_temps[i] = p.inlet_temp_c + (p.max_temp_c - p.inlet_temp_c) * u(rng);
    }
    std::sort(s.layer_temps.data(), s.layer_temps.data() + p.n_layers);
    vessel::StepInput in;
    in.heat_on = (rng() & 1) != 0;
    in.draw_volume_l = (rng() % 3 == 0) ? 0.0 : p.volume_total_l * u(rng);

    const auto r = vessel::step(s, p, in);
    const double e_prev = vessel::energy_content_kwh(s, p, 0.0);
    const double e_next = vessel::energy_content_kwh(r.next_state, p, 0.0);
    const double per_l = p.density_kg_per_l * p.specific_heat_kj / 3600.0;
    const double q_in = in.draw_volume_l * per_l * p.inlet_temp_c;
    const double q_out =
        in.draw_volume_l > 0 ? in.draw_volume_l * per_l * r.delivered_temp_c.value() : 0.0;
    const double resid =
        std::abs((e_next - e_prev) - (r.energy_used_kwh + q_in - q_out - r.losses_kwh));
    const double scale = std::max({std::abs(e_prev), std::abs(e_next), r.energy_used_kwh, q_in,
                                   q_out, std::abs(r.losses_kwh), 1e-6});
    (lossless ? worst_lossless : worst_lossy) =
        std::max(lossless ? worst_lossless : worst_lossy, resid / scale);
    bool mono = true;
    for (int i = 1; i < p.n_layers; ++i) {
      mono = mono && r.next_state.layer_temps[i] >= r.next_state.layer_temps[i - 1];
    }
    if (mono) ++monotone_ok;
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_lossless <= 1e-12 && worst_lossy <= 1e-9 &&
                    monotone_ok == n_steps && secs < 10.0;
  report(1, pass,
         fmt("physics conservation: max residual %.2e (lossless, tol 1e-12), %.2e (lossy, tol "
             "1e-9); monotone %d/%d; %.1fs (<10s)",
             worst_lossless, worst_lossy, monotone_ok, n_steps, secs));
}

// ---------------------------------------------------------------- criterion 2

void criterion_2_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // fit/predict vs the brute-force bin-mean oracle, exact equality. Samples
  // are confined to two temperature bins x two actions x two volume classes,
  // so at most 8 bins are populated.
  bool models_exact = true;
  for (int trial = 0; trial < 20; ++trial) {
    model::TransitionDataset ds;
    ds.sensor_count = 1;
    const int n_samples = 10 + static_cast<int>(rng() % 41);
    for (int i = 0; i < n_samples; ++i) {
      const double center = (rng() & 1) ? 30.0 : 70.0;
      const double t = center - 5 + 10 * u(rng);
      model::TransitionSample s;
      s.obs = sensing::Observation{ArrayXd::Constant(1, t), i};
      s.next_obs =
          sensing::Observation{ArrayXd::Constant(1, std::clamp(t - 8 + 16 * u(rng), 10.0, 90.0)),
                               i + 1};
      s.action = static_cast<int>(rng() & 1);
      s.draw_volume_l = (rng() & 1) ? 0.0 : 20.0;
      ds.samples.push_back(std::move(s));
    }
    model::FeatureBinning binning;
    binning.temp_bin_width_c = 20.0;
    const model::KnowledgeConfig kc{};
    auto m = model::fit(ds, kc, binning);
    auto om = test_oracle::oracle_fit(ds, kc, binning);
    if (m.populated_ids.size() != om.bins.size() || m.populated_ids.size() > 8) {
      models_exact = false;
    }
    for (int q = 0; q < 200 && models_exact; ++q) {
      ArrayXd obs = ArrayXd::Constant(1, 10 + 80 * u(rng));
      const int action = static_cast<int>(rng() & 1);
      const double vol = (rng() & 1) ? 0.0 : 45 * u(rng);
      const AgentMemory mem{};
      const double got = model::predict(m, obs, action, vol, mem)[0];
      const double want = test_oracle::oracle_predict(om, obs, action, vol, mem)[0];
      if (got != want) models_exact = false;
    }
  }

  // pool-adjacent-violators vs partition-enumeration QP over a 1 degC grid,
  // exhaustive for lengths <= 5.
  bool pav_ok = true;
  long pav_cases = 0;
  for (int n = 1; n <= 5 && pav_ok; ++n) {
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    while (true) {
      ArrayXd x(n);
      for (int i = 0; i < n; ++i) x[i] = 50.0 + digits[static_cast<std::size_t>(i)];
      const ArrayXd got = isotonic_non_decreasing(x, ArrayXd::Constant(n, 1.0));
      const std::vector<double> xv(x.data(), x.data() + n);
      const auto want = test_oracle::oracle_monotone_projection(xv);
      for (int i = 0; i < n; ++i) {
        if (std::abs(got[i] - want[static_cast<std::size_t>(i)]) > 1e-12) pav_ok = false;
      }
      ++pav_cases;
      int pos = n - 1;
      while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == 5) {
        digits[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++digits[static_cast<std::size_t>(pos)];
    }
  }

  const double secs = seconds_since(t0);
  const bool pass = models_exact && pav_ok && secs < 30.0;
  report(2, pass,
         fmt("oracle equivalence: 20 toy datasets exact=%s; PAV vs QP enumeration over %ld "
             "grid vectors (len<=5, 1degC grid, tol 1e-12) ok=%s; %.1fs (<30s)",
             models_exact ? "yes" : "no", pav_cases, pav_ok ? "yes" : "no", secs));
}

// ----------------------------------------------------------- criteria 3 to 6

struct RunOutcome {
  double energy = 0;
  int violations = 0;
  double coverage = 0;     // headline: pooled for MARL/RBC, best single for SARL
  double common_mae = std::numeric_limits<double>::quiet_NaN();
};

struct FigRuns {
  // per seed outcomes
  std::vector<RunOutcome> rbc, sarl_k, marl_k, marl_k_eps, marl_ki;
  double secs = 0;
};

harness::ExperimentConfig fig_config(harness::Strategy s, std::uint64_t seed,
                                     harness::ExplorationKind expl) {
  harness::ExperimentConfig cfg;
  cfg.strategies = {s};
  cfg.n_households = 10;
  cfg.n_days = 90;
  cfg.master_seed = seed;
  cfg.exploration_override = expl;
  return cfg;
}

FigRuns run_figure_experiments() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::uint64_t> seeds{101, 102, 103, 104, 105};
  FigRuns out;

  for (std::uint64_t seed : seeds) {
    harness::ExperimentConfig base = fig_config(harness::Strategy::kMarlK, seed,
                                                harness::ExplorationKind::kDefault);
    const auto eval = harness::build_common_eval(base);

    struct Job {
      harness::Strategy strat;
      harness::ExplorationKind expl;
      std::vector<RunOutcome>* sink;
    };
    const std::vector<Job> jobs{
        {harness::Strategy::kRbc, harness::ExplorationKind::kDefault, &out.rbc},
        {harness::Strategy::kSarlK, harness::ExplorationKind::kDefault, &out.sarl_k},
        {harness::Strategy::kMarlK, harness::ExplorationKind::kDefault, &out.marl_k},
        {harness::Strategy::kMarlK, harness::ExplorationKind::kEpsGreedy, &out.marl_k_eps},
        {harness::Strategy::kMarlKI, harness::ExplorationKind::kDefault, &out.marl_ki},
    };
    std::vector<std::future<RunOutcome>> futures;
    for (const auto& job : jobs) {
      futures.push_back(std::async(std::launch::async, [&, job] {
        const auto detail = harness::run_experiment_detail(fig_config(job.strat, seed, job.expl));
        const auto& m = detail.report.strategies[0];
        RunOutcome o;
        o.energy = m.cumulative_energy_kwh;
        o.violations = m.violations;
        o.coverage = m.final_coverage;
        o.common_mae = harness::common_eval_mae(detail.details[0], eval);
        return o;
      }));
    }
    for (std::size_t j = 0; j < jobs.size(); ++j) jobs[j].sink->push_back(futures[j].get());
  }
  out.secs = seconds_since(t0);
  return out;
}

void criteria_3_to_6(const FigRuns& runs) {
  const std::size_t n = runs.rbc.size();
  std::vector<double> cov_diff, cov_expl_diff, mae_ratio, ki_ratio, saving, viol_margin;
  std::vector<double> sarl_viol, marl_viol;
  for (std::size_t i = 0; i < n; ++i) {
    cov_diff.push_back(runs.marl_k[i].coverage - runs.sarl_k[i].coverage);
    cov_expl_diff.push_back(runs.marl_k[i].coverage - runs.marl_k_eps[i].coverage);
    mae_ratio.push_back(runs.marl_k[i].common_mae / runs.sarl_k[i].common_mae);
    ki_ratio.push_back(runs.marl_ki[i].common_mae / runs.marl_k[i].common_mae);
    saving.push_back(1.0 - runs.marl_k[i].energy / runs.rbc[i].energy);
    viol_margin.push_back(static_cast<double>(runs.marl_k[i].violations) -
                          (runs.rbc[i].violations + 2.0 * 10));
    sarl_viol.push_back(runs.sarl_k[i].violations);
    marl_viol.push_back(runs.marl_k[i].violations);
  }

  const bool c3 = median(cov_diff) > 0.0 && median(cov_expl_diff) >= 0.0 && runs.secs < 300.0;
  report(3, c3,
         fmt("coverage ordering: median coverage MARL(K)-SARL(K) = %+.3f (>0); targeted-eps = "
             "%+.3f (>=0); runs took %.0fs (<300s)",
             median(cov_diff), median(cov_expl_diff), runs.secs));

  const bool c4 = median(mae_ratio) <= 0.8 && median(ki_ratio) >= 0.8 && median(ki_ratio) <= 1.2;
  report(4, c4,
         fmt("model accuracy ordering: median MAE(MARL)/meanMAE(SARL) = %.3f (<=0.8); "
             "MAE(MARL_KI)/MAE(MARL_K) = %.3f (in [0.8,1.2])",
             median(mae_ratio), median(ki_ratio)));

  const bool c5 = median(saving) >= 0.20;
  report(5, c5,
         fmt("energy: median MARL(K) saving vs RBC = %.1f%% (>=20%%)",
             100 * median(saving)));

  const bool c6 = median(viol_margin) <= 0.0;
  report(6, c6,
         fmt("comfort: median violations MARL(K) - (RBC + 2/household) = %+.1f (<=0)",
             median(viol_margin)));
  std::printf(
      "INFO criterion 6: SARL(K) vs MARL(K) violations per seed:"
      " SARL median %.0f, MARL median %.0f -> SARL breach pattern %s (reported, not gated)\n",
      median(sarl_viol), median(marl_viol),
      median(sarl_viol) > median(marl_viol) ? "APPEARS" : "does NOT appear");
}

// ---------------------------------------------------------------- criterion 7

void criterion_7_determinism() {
  namespace fs = std::filesystem;
  harness::ExperimentConfig cfg;
  cfg.strategies = {harness::Strategy::kMarlK};
  cfg.n_households = 4;
  cfg.n_days = 12;
  cfg.master_seed = 31337;

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const fs::path d1 = fs::temp_directory_path() / "tankfleet_acc_det1";
  const fs::path d2 = fs::temp_directory_path() / "tankfleet_acc_det2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  harness::write_report(harness::run_experiment(cfg), d1);
  harness::write_report(harness::run_experiment(cfg), d2);
  const bool same_summary = slurp(d1 / "summary.csv") == slurp(d2 / "summary.csv");
  const bool same_daily = slurp(d1 / "daily.csv") == slurp(d2 / "daily.csv");
  report(7, same_summary && same_daily,
         fmt("determinism: identical config+seed reruns byte-identical (summary: %s, daily: %s)",
             same_summary ? "yes" : "no", same_daily ? "yes" : "no"));
}

// ---------------------------------------------------------------- criterion 8

void criterion_8_occupants() {
  auto profile = occupants::make_profile(occupants::Archetype::kFlat, 0, 4242);
  profile.activity_persistence = 0.7;
  const int days = 2000;
  const auto draws = occupants::generate_draws(profile, days, 4242);
  const double rho = occupants::lag_autocorrelation(occupants::daily_totals(draws, days, 96), 1);

  occupants::HouseholdProfile zero;
  zero.base_intensity = ArrayXd::Zero(96);
  const bool no_draws = occupants::generate_draws(zero, 100, 7).empty();

  report(8, rho > 0.3 && no_draws,
         fmt("occupant statistics: lag-1 autocorrelation %.3f (>0.3) at persistence 0.7 over "
             "2000 days; zero-intensity profile yields zero draws: %s",
             rho, no_draws ? "yes" : "no"));
}

}  // namespace

int main() {
  std::printf("tankfleet acceptance suite\n");
  criterion_1_physics();
  criterion_2_oracles();
  const auto runs = run_figure_experiments();
  criteria_3_to_6(runs);
  criterion_7_determinism();
  criterion_8_occupants();
  std::printf("%d criteria failed\n", g_failures);
  return g_failures;
}
