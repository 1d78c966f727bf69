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

#include <filesystem>
#include <map>
#include <string>

#include "tankfleet/harness.hpp"

namespace tankfleet::harness {

/// Flat `key = value` config text: one assignment per line, dotted section
/// prefixes (e.g. `vessel.n_layers = 10`), `#` comments, blank lines ignored.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// Apply parsed values onto a config. Unknown keys and malformed values
/// throw std::invalid_argument naming the key.
void apply_config(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv);

}  // namespace tankfleet::harness
