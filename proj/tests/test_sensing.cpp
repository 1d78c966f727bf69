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

#include <random>

#include "tankfleet/sensing.hpp"

using namespace tankfleet;
using namespace tankfleet::sensing;

namespace {

vessel::VesselParams params_with_layers(int n) {
  vessel::VesselParams p;
  p.n_layers = n;
  return p;
}

vessel::VesselState state_of(std::initializer_list<double> temps) {
  vessel::VesselState s;
  s.layer_temps = ArrayXd(static_cast<Eigen::Index>(temps.size()));
  Eigen::Index i = 0;
  for (double t : temps) s.layer_temps[i++] = t;
  return s;
}

SensorConfig midpoint(double noise = 0.0) {
  return SensorConfig{SensorConfig::Kind::kMidpoint, 4, noise};
}

SensorConfig array_of(int k, double noise = 0.0) {
  return SensorConfig{SensorConfig::Kind::kArray, k, noise};
}

}  // namespace

TEST_CASE("observe: midpoint reads layer floor(n/2)") {
  auto p = params_with_layers(4);
  std::mt19937_64 rng(1);
  auto obs = observe(state_of({10, 30, 50, 70}), p, midpoint(), rng, 0);
  REQUIRE(obs.sensor_temps.size() == 1);
  CHECK(obs.sensor_temps[0] == 50.0);
}

TEST_CASE("observe: two-sensor array reads the endpoints") {
  auto p = params_with_layers(4);
  std::mt19937_64 rng(1);
  auto obs = observe(state_of({10, 30, 50, 70}), p, array_of(2), rng, 5);
  REQUIRE(obs.sensor_temps.size() == 2);
  CHECK(obs.sensor_temps[0] == 10.0);
  CHECK(obs.sensor_temps[1] == 70.0);
  CHECK(obs.step_index == 5);
}

TEST_CASE("observe: noiseless observation is deterministic") {
  auto p = params_with_layers(4);
  std::mt19937_64 r1(1), r2(999);
  auto a = observe(state_of({10, 30, 50, 70}), p, midpoint(), r1, 0);
  auto b = observe(state_of({10, 30, 50, 70}), p, midpoint(), r2, 0);
  CHECK((a.sensor_temps == b.sensor_temps).all());
}

TEST_CASE("observe: full array equals the profile and inherits monotonicity") {
  auto p = params_with_layers(5);
  std::mt19937_64 rng(3);
  auto st = state_of({12, 20, 41, 56, 80});
  auto obs = observe(st, p, array_of(5), rng, 0);
  CHECK((obs.sensor_temps == st.layer_temps).all());
  for (int i = 1; i < 5; ++i) CHECK(obs.sensor_temps[i] >= obs.sensor_temps[i - 1]);
}

TEST_CASE("observe: midpoint never reveals more than one value") {
  auto p = params_with_layers(10);
  std::mt19937_64 rng(8);
  auto obs = observe(vessel::make_uniform_state(p, 55), p, midpoint(0.25), rng, 0);
  CHECK(obs.sensor_temps.size() == 1);
}

TEST_CASE("observe: array wider than the vessel is a config error") {
  auto p = params_with_layers(3);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(observe(vessel::make_uniform_state(p, 50), p, array_of(4), rng, 0),
                  std::invalid_argument);
}

TEST_CASE("observe: seeded noise is reproducible and clipped to the range") {
  auto p = params_with_layers(4);
  auto st = state_of({10, 30, 50, 89.9});
  std::mt19937_64 r1(77), r2(77);
  auto a = observe(st, p, array_of(4, 25.0), r1, 0);
  auto b = observe(st, p, array_of(4, 25.0), r2, 0);
  CHECK((a.sensor_temps == b.sensor_temps).all());
  CHECK((a.sensor_temps >= p.inlet_temp_c).all());
  CHECK((a.sensor_temps <= p.max_temp_c).all());
}

TEST_CASE("sensor_layers: array spacing includes bottom and top") {
  auto layers = sensor_layers(array_of(4), 10);
  REQUIRE(layers.size() == 4);
  CHECK(layers[0] == 0);
  CHECK(layers[1] == 3);
  CHECK(layers[2] == 6);
  CHECK(layers[3] == 9);
}
