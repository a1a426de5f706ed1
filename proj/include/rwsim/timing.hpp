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

#include <optional>

namespace rwsim {

/// Optical path lengths from the source and the free-space separation of the
/// two stations. Lengths in metres, c_eff in metres per second.
struct Geometry {
    double path_s_to_a = 30.0;
    double path_s_to_b = 30.0;
    double dist_a_to_b = 60.0;
    double c_eff = 3.0e8;

    /// K = |S-B| - |S-A|.
    double path_difference() const {
        return path_s_to_b - path_s_to_a;
    }
    void validate() const;
    bool operator==(const Geometry &) const = default;
};

/// Propagation speed of the collapse from Alice to Bob, in units of c_eff.
struct CollapseSpec {
    std::optional<double> speed;  // empty = instantaneous

    static CollapseSpec infinite() {
        return {};
    }
    static CollapseSpec finite(double speed_in_c) {
        return {speed_in_c};
    }
    bool is_infinite() const {
        return !speed.has_value();
    }
    void validate() const;
    bool operator==(const CollapseSpec &) const = default;
};

struct EventTimes {
    double tau_a;
    double tau_b;
};

/// Flight times with additive jitter, clamped at zero.
EventTimes flight_times(const Geometry &g, double jitter_a, double jitter_b);

/// True when Alice's collapse has reached Bob by the time his photon is detected.
bool decohered_before_bob(const EventTimes &t, const Geometry &g, const CollapseSpec &c);

/// Path difference K at which the ordering flips with zero jitter.
double predicted_kink_center(const Geometry &g, const CollapseSpec &c);

/// Kink width (Gaussian sigma in K) produced by independent Gaussian jitter
/// `jitter_sigma` on both photons.
double predicted_kink_width(const Geometry &g, double jitter_sigma);

}  // namespace rwsim
