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

#include "tankfleet/model_learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tankfleet/isotonic.hpp"

namespace tankfleet::model {

namespace {

constexpr int kMaxFeatures = kMaxSensors + 5;

bool use_engineered(const KnowledgeConfig& k) { return k.enabled && k.engineered_features; }

int feature_count_for(int sensor_count, const KnowledgeConfig& k) {
  return sensor_count + 2 + (use_engineered(k) ? 3 : 0);
}

// Raw feature vector; returns the feature count.
int featurize_raw(const double* obs, int sensor_count, int action, double draw_volume_l,
                  const KnowledgeConfig& knowledge, const AgentMemory& mem, double* out) {
  int f = 0;
  for (int s = 0; s < sensor_count; ++s) out[f++] = obs[s];
  out[f++] = static_cast<double>(action);
  out[f++] = draw_volume_l;
  if (use_engineered(knowledge)) {
    out[f++] = mem.time_since_reheat;
    out[f++] = mem.vol_since_reheat;
    double mean = 0.0;
    for (int s = 0; s < sensor_count; ++s) mean += obs[s];
    out[f++] = mean / sensor_count;
  }
  return f;
}

// Per-feature bin indices for a raw feature vector. Layout: temps...,
// action, volume class, then tsr / vsr / mean-temp classes.
void bin_indices(const FeatureBinning& b, const double* features, int sensor_count,
                 bool engineered, int* idx) {
  int f = 0;
  for (int s = 0; s < sensor_count; ++s, ++f) idx[f] = b.temp_bin(features[f]);
  idx[f] = features[f] != 0.0 ? 1 : 0;
  ++f;
  idx[f] = b.volume_class(features[f]);
  ++f;
  if (engineered) {
    idx[f] = FeatureBinning::class_of(features[f], b.time_since_reheat_edges);
    ++f;
    idx[f] = FeatureBinning::class_of(features[f], b.vol_since_reheat_edges);
    ++f;
    idx[f] = FeatureBinning::class_of(features[f], b.mean_temp_edges);
    ++f;
  }
}

void feature_radices(const FeatureBinning& b, int sensor_count, bool engineered,
                     std::int64_t* radices, int* count) {
  int f = 0;
  const auto t = static_cast<std::int64_t>(b.temp_axis_size());
  for (int s = 0; s < sensor_count; ++s) radices[f++] = t;
  radices[f++] = 2;
  radices[f++] = static_cast<std::int64_t>(b.volume_class_edges.size()) + 1;
  if (engineered) {
    radices[f++] = static_cast<std::int64_t>(b.time_since_reheat_edges.size()) + 1;
    radices[f++] = static_cast<std::int64_t>(b.vol_since_reheat_edges.size()) + 1;
    radices[f++] = static_cast<std::int64_t>(b.mean_temp_edges.size()) + 1;
  }
  *count = f;
}

std::int64_t compose_id(const int* idx, const std::int64_t* radices, int n) {
  std::int64_t id = 0;
  for (int f = 0; f < n; ++f) id = id * radices[f] + idx[f];
  return id;
}

void decompose_id(std::int64_t id, const std::int64_t* radices, int n, int* idx) {
  for (int f = n - 1; f >= 0; --f) {
    idx[f] = static_cast<int>(id % radices[f]);
    id /= radices[f];
  }
}

void check_capacity(const std::int64_t* radices, int n) {
  std::int64_t cap = 1;
  for (int f = 0; f < n; ++f) {
    if (__builtin_mul_overflow(cap, radices[f], &cap)) {
      throw std::invalid_argument("feature bin space exceeds 64-bit ids");
    }
  }
}

void project_constraints_inplace(double* pred, int sensor_count, const KnowledgeConfig& k,
                                 int action, const double* prev_obs, double inlet, double maxt) {
  if (k.endpoint_clamp) {
    for (int s = 0; s < sensor_count; ++s) pred[s] = std::clamp(pred[s], inlet, maxt);
  }
  if (k.monotone_profile && sensor_count >= 2) {
    double w[kMaxSensors];
    std::fill(w, w + sensor_count, 1.0);
    isotonic_non_decreasing_inplace(pred, w, static_cast<std::size_t>(sensor_count));
  }
  if (k.standby_non_increasing && action == 0) {
    for (int s = 0; s < sensor_count; ++s) pred[s] = std::min(pred[s], prev_obs[s]);
  }
}

std::int64_t resolve_fallback(const TransitionModel& m, std::int64_t miss_id, const int* qidx,
                              int n_features) {
  auto& memo = *m.fallback_memo;
  std::lock_guard<std::mutex> lock(memo.mutex);
  if (auto it = memo.resolved.find(miss_id); it != memo.resolved.end()) return it->second;

  // Nearest populated bin by L1 distance on indices, restricted to bins with
  // the same action: heating deltas must never be answered from standby data
  // (and vice versa), or a planner probing an unvisited region concludes the
  // heater does nothing there. If no populated bin shares the action, search
  // everything. Rows are in ascending id order, so the first strict
  // improvement keeps the lowest id on ties.
  const int action_feature = m.sensor_count;
  std::int64_t best_id = -1;
  for (int pass = 0; pass < 2 && best_id < 0; ++pass) {
    const bool match_action = pass == 0;
    long best_dist = -1;
    for (Eigen::Index r = 0; r < m.populated_indices.rows(); ++r) {
      if (match_action && m.populated_indices(r, action_feature) != qidx[action_feature]) {
        continue;
      }
      long dist = 0;
      for (int f = 0; f < n_features; ++f) {
        dist += std::abs(static_cast<long>(qidx[f]) - m.populated_indices(r, f));
      }
      if (best_dist < 0 || dist < best_dist) {
        best_dist = dist;
        best_id = m.populated_ids[static_cast<std::size_t>(r)];
        if (dist == 1) break;  // the query bin itself is unpopulated
      }
    }
  }
  memo.resolved.emplace(miss_id, best_id);
  return best_id;
}

}  // namespace

void KnowledgeConfig::validate() const {
  if (!enabled && any_constraint()) {
    throw std::invalid_argument("constraints require knowledge to be enabled");
  }
}

void FeatureBinning::validate() const {
  if (!(temp_bin_width_c > 0)) throw std::invalid_argument("temp_bin_width_c must be positive");
  if (!(temp_min_c < temp_max_c)) throw std::invalid_argument("temp range empty");
  auto check_edges = [](const std::vector<double>& e, const char* what) {
    if (!std::is_sorted(e.begin(), e.end())) {
      throw std::invalid_argument(std::string(what) + " edges must be sorted");
    }
  };
  check_edges(volume_class_edges, "volume");
  check_edges(time_since_reheat_edges, "time_since_reheat");
  check_edges(vol_since_reheat_edges, "vol_since_reheat");
  check_edges(mean_temp_edges, "mean_temp");
}

int FeatureBinning::temp_axis_size() const {
  const int lo = static_cast<int>(std::floor(temp_min_c / temp_bin_width_c));
  const int hi = static_cast<int>(std::floor(temp_max_c / temp_bin_width_c));
  return hi - lo + 1;
}

int FeatureBinning::temp_bin(double t) const {
  const int lo = static_cast<int>(std::floor(temp_min_c / temp_bin_width_c));
  const int hi = static_cast<int>(std::floor(temp_max_c / temp_bin_width_c));
  const int raw = static_cast<int>(std::floor(t / temp_bin_width_c));
  return std::clamp(raw, lo, hi) - lo;
}

int FeatureBinning::volume_class(double v) const {
  // {0}, (e0, e1], (e1, e2], ..., > e_last  with e0 = 0.
  for (std::size_t i = 0; i < volume_class_edges.size(); ++i) {
    if (v <= volume_class_edges[i]) return static_cast<int>(i);
  }
  return static_cast<int>(volume_class_edges.size());
}

int FeatureBinning::class_of(double v, const std::vector<double>& edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (v < edges[i]) return static_cast<int>(i);
  }
  return static_cast<int>(edges.size());
}

int TransitionModel::feature_count() const {
  return feature_count_for(sensor_count, knowledge);
}

std::vector<std::int64_t> TransitionModel::feature_radices() const {
  std::int64_t radices[kMaxFeatures];
  int n = 0;
  model::feature_radices(binning, sensor_count, use_engineered(knowledge), radices, &n);
  return {radices, radices + n};
}

ArrayXd featurize(const ArrayXd& obs_temps, int action, double draw_volume_l,
                  const KnowledgeConfig& knowledge, const AgentMemory& memory) {
  knowledge.validate();
  const int k = static_cast<int>(obs_temps.size());
  if (k < 1 || k > kMaxSensors) throw std::invalid_argument("unsupported sensor count");
  double buf[kMaxFeatures];
  const int n = featurize_raw(obs_temps.data(), k, action, draw_volume_l, knowledge, memory, buf);
  return Eigen::Map<const ArrayXd>(buf, n);
}

TransitionModel fit(const TransitionDataset& dataset, const KnowledgeConfig& knowledge,
                    const FeatureBinning& binning) {
  knowledge.validate();
  binning.validate();
  if (dataset.samples.empty()) throw std::invalid_argument("fit: empty dataset");
  const int k = dataset.sensor_count;
  if (k < 1 || k > kMaxSensors) throw std::invalid_argument("fit: unsupported sensor count");

  TransitionModel m;
  m.binning = binning;
  m.knowledge = knowledge;
  m.sensor_count = k;

  const bool engineered = use_engineered(knowledge);
  std::int64_t radices[kMaxFeatures];
  int nf = 0;
  feature_radices(binning, k, engineered, radices, &nf);
  check_capacity(radices, nf);

  double features[kMaxFeatures];
  int idx[kMaxFeatures];
  for (const auto& s : dataset.samples) {
    if (s.obs.sensor_temps.size() != k || s.next_obs.sensor_temps.size() != k) {
      throw std::invalid_argument("fit: sample sensor count mismatch");
    }
    AgentMemory mem{s.time_since_reheat, s.vol_since_reheat};
    featurize_raw(s.obs.sensor_temps.data(), k, s.action, s.draw_volume_l, knowledge, mem,
                  features);
    bin_indices(binning, features, k, engineered, idx);
    const std::int64_t id = compose_id(idx, radices, nf);
    auto& st = m.bin_stats[id];
    if (st.count == 0) st.sum_delta = ArrayXd::Zero(k);
    ++st.count;
    st.sum_delta += (s.next_obs.sensor_temps - s.obs.sensor_temps);
  }

  m.populated_ids.reserve(m.bin_stats.size());
  for (const auto& [id, st] : m.bin_stats) m.populated_ids.push_back(id);
  std::sort(m.populated_ids.begin(), m.populated_ids.end());
  m.populated_indices.resize(static_cast<Eigen::Index>(m.populated_ids.size()), nf);
  for (std::size_t r = 0; r < m.populated_ids.size(); ++r) {
    auto& st = m.bin_stats.at(m.populated_ids[r]);
    st.mean_delta = st.sum_delta / static_cast<double>(st.count);
    decompose_id(m.populated_ids[r], radices, nf, idx);
    for (int f = 0; f < nf; ++f) m.populated_indices(static_cast<Eigen::Index>(r), f) = idx[f];
  }
  return m;
}

void predict_into(const TransitionModel& fitted, const double* obs_temps, int action,
                  double draw_volume_l, const AgentMemory& memory, double* out) {
  if (!fitted.fitted()) throw std::invalid_argument("predict: model has no populated bins");
  const int k = fitted.sensor_count;
  const bool engineered = use_engineered(fitted.knowledge);

  double features[kMaxFeatures];
  int idx[kMaxFeatures];
  std::int64_t radices[kMaxFeatures];
  int nf = 0;
  featurize_raw(obs_temps, k, action, draw_volume_l, fitted.knowledge, memory, features);
  feature_radices(fitted.binning, k, engineered, radices, &nf);
  bin_indices(fitted.binning, features, k, engineered, idx);
  std::int64_t id = compose_id(idx, radices, nf);

  auto it = fitted.bin_stats.find(id);
  if (it == fitted.bin_stats.end()) {
    id = resolve_fallback(fitted, id, idx, nf);
    it = fitted.bin_stats.find(id);
  }
  const ArrayXd& delta = it->second.mean_delta;

  double prev[kMaxSensors];
  for (int s = 0; s < k; ++s) prev[s] = obs_temps[s];
  for (int s = 0; s < k; ++s) out[s] = prev[s] + delta[s];
  if (fitted.knowledge.enabled) {
    project_constraints_inplace(out, k, fitted.knowledge, action, prev,
                                fitted.binning.temp_min_c, fitted.binning.temp_max_c);
  }
}

ArrayXd predict(const TransitionModel& fitted, const ArrayXd& obs_temps, int action,
                double draw_volume_l, const AgentMemory& memory) {
  if (obs_temps.size() != fitted.sensor_count) {
    throw std::invalid_argument("predict: sensor count mismatch");
  }
  ArrayXd out(fitted.sensor_count);
  predict_into(fitted, obs_temps.data(), action, draw_volume_l, memory, out.data());
  return out;
}

ArrayXd project_constraints(const ArrayXd& pred, const KnowledgeConfig& knowledge, int action,
                            const ArrayXd& prev_obs, double inlet_temp_c, double max_temp_c) {
  knowledge.validate();
  if (!knowledge.enabled) throw std::invalid_argument("project_constraints: knowledge disabled");
  if (pred.size() != prev_obs.size()) throw std::invalid_argument("size mismatch");
  const int k = static_cast<int>(pred.size());
  if (k > kMaxSensors) throw std::invalid_argument("unsupported sensor count");
  ArrayXd out = pred;
  project_constraints_inplace(out.data(), k, knowledge, action, prev_obs.data(), inlet_temp_c,
                              max_temp_c);
  return out;
}

TransitionDataset pool(const std::vector<TransitionDataset>& datasets) {
  if (datasets.empty()) throw std::invalid_argument("pool: no datasets");
  TransitionDataset out;
  out.sensor_count = datasets.front().sensor_count;
  std::size_t total = 0;
  for (const auto& d : datasets) {
    if (d.sensor_count != out.sensor_count) {
      throw std::invalid_argument("pool: mixed sensor counts");
    }
    total += d.samples.size();
  }
  out.samples.reserve(total);
  for (const auto& d : datasets) {
    out.samples.insert(out.samples.end(), d.samples.begin(), d.samples.end());
  }
  return out;
}

double evaluate_mae(const TransitionModel& fitted, const TransitionDataset& heldout) {
  if (heldout.samples.empty()) throw std::invalid_argument("evaluate_mae: empty dataset");
  if (heldout.sensor_count != fitted.sensor_count) {
    throw std::invalid_argument("evaluate_mae: sensor count mismatch");
  }
  const int k = fitted.sensor_count;
  double pred[kMaxSensors];
  double abs_sum = 0.0;
  for (const auto& s : heldout.samples) {
    AgentMemory mem{s.time_since_reheat, s.vol_since_reheat};
    predict_into(fitted, s.obs.sensor_temps.data(), s.action, s.draw_volume_l, mem, pred);
    for (int i = 0; i < k; ++i) abs_sum += std::abs(pred[i] - s.next_obs.sensor_temps[i]);
  }
  return abs_sum / (static_cast<double>(heldout.samples.size()) * k);
}

std::string model_summary(const TransitionModel& fitted) {
  std::ostringstream os;
  std::int64_t capacity = 1;
  for (auto r : fitted.feature_radices()) capacity *= r;
  os << "sensors=" << fitted.sensor_count << " features=" << fitted.feature_count()
     << " bin_capacity=" << capacity << " populated=" << fitted.populated_ids.size() << "\n";
  for (auto id : fitted.populated_ids) {
    const auto& st = fitted.bin_stats.at(id);
    os << "bin " << id << " count=" << st.count << " mean_delta=[";
    for (Eigen::Index s = 0; s < st.mean_delta.size(); ++s) {
      if (s) os << ",";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", st.mean_delta[s]);
      os << buf;
    }
    os << "]\n";
  }
  return os.str();
}

void write_dataset_csv(const TransitionDataset& dataset, std::ostream& out) {
  const int k = dataset.sensor_count;
  out << "household_id,step";
  for (int s = 0; s < k; ++s) out << ",obs_" << s;
  out << ",action,draw_volume_l";
  for (int s = 0; s < k; ++s) out << ",next_obs_" << s;
  out << ",time_since_reheat,vol_since_reheat\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), ",%.6g", v);
    out << buf;
  };
  for (const auto& s : dataset.samples) {
    out << s.household_id << "," << s.obs.step_index;
    for (int i = 0; i < k; ++i) put(s.obs.sensor_temps[i]);
    out << "," << s.action;
    std::snprintf(buf, sizeof(buf), ",%.6g", s.draw_volume_l);
    out << buf;
    for (int i = 0; i < k; ++i) put(s.next_obs.sensor_temps[i]);
    put(s.time_since_reheat);
    put(s.vol_since_reheat);
    out << "\n";
  }
}

}  // namespace tankfleet::model
