// Copyright 2026 The rwsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rwsim/experiment_config.hpp"

namespace rwsim {

/// Parses the sectioned key-value format:
///
///     # comment
///     [source]
///     type = TypeII
///     [run]
///     delta_r_grid = linspace(0, 8e-7, 16)
///     K_grid = -1, -0.5, 0, 0.5, 1
///
/// Sections: source, model, optics_a, optics_b, interferometer, geometry,
/// collapse, noise, coincidence, run. `source.type`, `run.delta_r_grid` and
/// `run.K_grid` are required; everything else has a default. Throws
/// ConfigError naming the line and field for unknown or duplicate keys,
/// malformed values, missing fields and violated invariants.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file; IoError if it cannot be read.
ExperimentConfig load_config(const std::filesystem::path &path);

/// Every key of every section in a fixed order, numbers in shortest
/// round-trip form and grids as explicit lists.
std::string to_canonical_text(const ExperimentConfig &cfg);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig &cfg);

/// Case-insensitive model name; throws ConfigError for unknown names.
StateModel parse_state_model(std::string_view name);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace rwsim
