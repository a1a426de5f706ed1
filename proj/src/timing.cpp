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

#include "rwsim/timing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwsim {

void Geometry::validate() const {
    for (double v : {path_s_to_a, path_s_to_b, dist_a_to_b, c_eff}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("geometry lengths and c_eff must be finite and > 0");
        }
    }
}

void CollapseSpec::validate() const {
    if (speed && !(*speed > 0.0 && std::isfinite(*speed))) {
        throw std::invalid_argument("collapse speed must be > 0 or infinite");
    }
}

EventTimes flight_times(const Geometry &g, double jitter_a, double jitter_b) {
    return {std::max(0.0, g.path_s_to_a / g.c_eff + jitter_a), std::max(0.0, g.path_s_to_b / g.c_eff + jitter_b)};
}

bool decohered_before_bob(const EventTimes &t, const Geometry &g, const CollapseSpec &c) {
    if (c.is_infinite()) {
        return t.tau_a < t.tau_b;
    }
    return t.tau_a + g.dist_a_to_b / (*c.speed * g.c_eff) <= t.tau_b;
}

double predicted_kink_center(const Geometry &g, const CollapseSpec &c) {
    return c.is_infinite() ? 0.0 : g.dist_a_to_b / *c.speed;
}

double predicted_kink_width(const Geometry &g, double jitter_sigma) {
    return g.c_eff * jitter_sigma * std::sqrt(2.0);
}

}  // namespace rwsim
