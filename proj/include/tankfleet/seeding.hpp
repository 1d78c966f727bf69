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

#include <cstdint>

namespace tankfleet::harness {

/// splitmix64 finalizer; full-period bijective mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

enum class SeedStream : std::uint64_t { kOccupant = 1, kNoise = 2, kPolicy = 3 };

/// Deterministic per-(master, household, stream) seed: chained splitmix64
/// rounds, one per input, so any single-field change reshuffles the result.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t household_id,
                                 SeedStream stream) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ splitmix64(household_id * 0xD1B54A32D192ED03ull));
  h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(stream) * 0x8CB92BA72F3D8DD7ull));
  return h;
}

/// Fork an independent sub-stream off an existing seed.
inline std::uint64_t fork_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag * 0xA24BAED4963EE407ull));
}

}  // namespace tankfleet::harness
