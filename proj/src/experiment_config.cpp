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

#include "rwsim/experiment_config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rwsim {

namespace {

void require(bool ok, const char *message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

bool in_unit_interval(double v) {
    return v >= 0.0 && v <= 1.0;
}

}  // namespace

void NoiseSpec::validate() const {
    require(epsilon >= 0.0 && std::isfinite(epsilon), "epsilon must be finite and >= 0");
    require(in_unit_interval(noise_fringe_visibility), "noise_fringe_visibility must lie in [0, 1]");
    for (double eff : {efficiency_atd, efficiency_ard, efficiency_fd}) {
        require(eff > 0.0 && eff <= 1.0, "detector efficiencies must lie in (0, 1]");
    }
    require(dark_rate >= 0.0 && std::isfinite(dark_rate), "dark_rate must be finite and >= 0");
    require(jitter_sigma >= 0.0 && std::isfinite(jitter_sigma), "jitter_sigma must be finite and >= 0");
}

void CoincidenceSpec::validate() const {
    require(window > 0.0 && std::isfinite(window), "coincidence window must be > 0");
}

void ExperimentConfig::validate() const {
    source.validate();
    bs_a.validate();
    bs_b.validate();
    interferometer.validate();
    geometry.validate();
    collapse.validate();
    noise.validate();
    coincidence.validate();
    require(trials_per_point >= kMinTrialsPerPoint, "trials_per_point must be >= 100");
    for (double v : delta_r_grid) {
        require(std::isfinite(v), "delta_r_grid values must be finite");
    }
    for (double v : kink_grid) {
        require(std::isfinite(v), "K_grid values must be finite");
        require(geometry.path_s_to_a + v > 0.0, "K_grid value makes |S-B| non-positive");
    }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return out;
}

}  // namespace rwsim
