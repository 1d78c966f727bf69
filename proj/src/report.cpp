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
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tankfleet/harness.hpp"

namespace tankfleet::harness {

namespace {

std::string num6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw std::runtime_error("missing column: " + name);
  }
};

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Table t;
  std::string line;
  if (std::getline(in, line)) t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split_csv_line(line));
  }
  return t;
}

}  // namespace

void write_report(const MetricsReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  auto summary = open_out(out_dir / "summary.csv");
  summary << "strategy,cumulative_energy_kwh,violations,final_coverage,final_mae\n";
  for (const auto& s : report.strategies) {
    summary << to_string(s.strategy) << "," << num6(s.cumulative_energy_kwh) << ","
            << s.violations << "," << num6(s.final_coverage) << "," << num6(s.final_mae_c)
            << "\n";
  }

  auto daily = open_out(out_dir / "daily.csv");
  daily << "strategy,day,energy_kwh,violations,coverage_pooled,coverage_best,model_mae\n";
  for (const auto& s : report.strategies) {
    for (const auto& d : s.daily) {
      daily << to_string(s.strategy) << "," << d.day << "," << num6(d.energy_kwh) << ","
            << d.violations << "," << num6(d.coverage_pooled) << "," << num6(d.coverage_best)
            << "," << num6(d.model_mae_c) << "\n";
    }
  }
}

void write_transition_dumps(const RunDetail& detail, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const bool single = detail.details.size() == 1;
  for (const auto& sd : detail.details) {
    for (std::size_t i = 0; i < sd.datasets.size(); ++i) {
      std::ostringstream name;
      name << "transitions_";
      if (!single) name << to_string(sd.strategy) << "_";
      name << i << ".csv";
      auto out = open_out(out_dir / name.str());
      model::write_dataset_csv(sd.datasets[i], out);
    }
  }
}

void write_model_summaries(const RunDetail& detail, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& sd : detail.details) {
    for (std::size_t i = 0; i < sd.models.size(); ++i) {
      if (!sd.models[i].fitted()) continue;
      std::ostringstream name;
      name << "model_" << to_string(sd.strategy);
      if (sd.models.size() > 1) name << "_" << i;
      name << ".txt";
      auto out = open_out(out_dir / name.str());
      out << model::model_summary(sd.models[i]);
    }
  }
}

void write_plot_data(const std::filesystem::path& run_dir) {
  const Table daily = read_csv(run_dir / "daily.csv");
  const Table summary = read_csv(run_dir / "summary.csv");

  const int c_strat = daily.column("strategy");
  const int c_day = daily.column("day");
  const int c_pooled = daily.column("coverage_pooled");
  const int c_best = daily.column("coverage_best");
  const int c_mae = daily.column("model_mae");

  // Strategy order as first seen in daily.csv.
  std::vector<std::string> strategies;
  std::map<std::string, std::map<int, std::pair<std::string, std::string>>> series;
  int max_day = -1;
  for (const auto& row : daily.rows) {
    const std::string& name = row[static_cast<std::size_t>(c_strat)];
    if (series.find(name) == series.end()) strategies.push_back(name);
    const int day = std::stoi(row[static_cast<std::size_t>(c_day)]);
    max_day = std::max(max_day, day);
    // Headline coverage: best single household for SARL, pooled otherwise.
    const bool sarl = name.rfind("SARL", 0) == 0;
    const std::string& cov = row[static_cast<std::size_t>(sarl ? c_best : c_pooled)];
    series[name][day] = {cov, row[static_cast<std::size_t>(c_mae)]};
  }

  auto fig1a = open_out(run_dir / "fig1a.csv");
  auto fig1b = open_out(run_dir / "fig1b.csv");
  fig1a << "day";
  fig1b << "day";
  for (const auto& s : strategies) {
    fig1a << "," << s;
    fig1b << "," << s;
  }
  fig1a << "\n";
  fig1b << "\n";
  for (int day = 0; day <= max_day; ++day) {
    fig1a << day;
    fig1b << day;
    for (const auto& s : strategies) {
      auto it = series[s].find(day);
      fig1a << "," << (it == series[s].end() ? "" : it->second.first);
      fig1b << "," << (it == series[s].end() ? "" : it->second.second);
    }
    fig1a << "\n";
    fig1b << "\n";
  }

  const int s_strat = summary.column("strategy");
  const int s_energy = summary.column("cumulative_energy_kwh");
  const int s_viol = summary.column("violations");
  auto fig3a = open_out(run_dir / "fig3a.csv");
  auto fig3b = open_out(run_dir / "fig3b.csv");
  fig3a << "strategy,cumulative_energy_kwh\n";
  fig3b << "strategy,violations\n";
  for (const auto& row : summary.rows) {
    fig3a << row[static_cast<std::size_t>(s_strat)] << ","
          << row[static_cast<std::size_t>(s_energy)] << "\n";
    fig3b << row[static_cast<std::size_t>(s_strat)] << ","
          << row[static_cast<std::size_t>(s_viol)] << "\n";
  }
}

}  // namespace tankfleet::harness
