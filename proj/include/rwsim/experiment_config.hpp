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

#include <cstdint>
#include <vector>

#include "rwsim/optics.hpp"
#include "rwsim/timing.hpp"

namespace rwsim {

/// Imperfections. Everything defaults to ideal so analytic values stay exact.
struct NoiseSpec {
    /// Uncorrelated singles reaching Bob per signal pair.
    double epsilon = 0.0;
    /// Fringe visibility of those singles.
    double noise_fringe_visibility = 1.0;
    double efficiency_atd = 1.0;
    double efficiency_ard = 1.0;
    double efficiency_fd = 1.0;
    /// Expected dark counts per detector per trial.
    double dark_rate = 0.0;
    /// Gaussian flight-time jitter per photon, seconds.
    double jitter_sigma = 0.0;

    void validate() const;
    bool operator==(const NoiseSpec &) const = default;
};

struct CoincidenceSpec {
    double window = 50e-9;
    bool enabled = true;

    void validate() const;
    bool operator==(const CoincidenceSpec &) const = default;
};

/// Full description of a run. `kink_grid` holds K = |S-B| - |S-A| values.
struct ExperimentConfig {
    SourceSpec source;
    StateModel model = StateModel::PaperReduced;
    BeamSplitterSpec bs_a;
    BeamSplitterSpec bs_b;
    InterferometerSpec interferometer;
    Geometry geometry;
    CollapseSpec collapse;
    NoiseSpec noise;
    CoincidenceSpec coincidence;
    std::uint64_t trials_per_point = 20000;
    std::vector<double> delta_r_grid;
    std::vector<double> kink_grid;
    std::uint64_t master_seed = 1;

    /// Checks every component; throws std::invalid_argument on the first violation.
    void validate() const;
    bool operator==(const ExperimentConfig &) const = default;
};

inline constexpr std::uint64_t kMinTrialsPerPoint = 100;

/// `n` evenly spaced values from `lo` to `hi` inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace rwsim
