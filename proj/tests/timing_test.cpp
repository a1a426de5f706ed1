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

#include <cmath>
#include <random>
#include <stdexcept>

#include "gtest/gtest.h"

using namespace rwsim;

TEST(FlightTimes, arithmetic) {
    Geometry g;
    auto t = flight_times(g, 0.0, 0.0);
    EXPECT_NEAR(t.tau_a, 100e-9, 1e-18);
    EXPECT_NEAR(t.tau_b, 100e-9, 1e-18);
    EXPECT_NEAR(flight_times(g, -0.2e-9, 0.0).tau_a, 99.8e-9, 1e-18);
    g.path_s_to_b = 33.0;
    EXPECT_NEAR(flight_times(g, 0.0, 0.0).tau_b, 110e-9, 1e-18);
}

TEST(FlightTimes, never_negative) {
    Geometry g;
    g.path_s_to_a = 0.1;
    EXPECT_EQ(flight_times(g, -1e-6, 0.0).tau_a, 0.0);
}

TEST(DecoheredBeforeBob, infinite_speed_is_strict_ordering) {
    Geometry g;
    auto inf = CollapseSpec::infinite();
    EXPECT_TRUE(decohered_before_bob({100e-9, 110e-9}, g, inf));
    EXPECT_FALSE(decohered_before_bob({110e-9, 100e-9}, g, inf));
    EXPECT_FALSE(decohered_before_bob({100e-9, 100e-9}, g, inf));
}

TEST(DecoheredBeforeBob, finite_speed_needs_signal_arrival) {
    Geometry g;  // 60 m between the stations
    EXPECT_FALSE(decohered_before_bob({100e-9, 110e-9}, g, CollapseSpec::finite(10.0)));
    EXPECT_TRUE(decohered_before_bob({100e-9, 121e-9}, g, CollapseSpec::finite(10.0)));
}

TEST(DecoheredBeforeBob, monotone_in_bob_delay) {
    Geometry g;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 500e-9);
    for (auto c : {CollapseSpec::infinite(), CollapseSpec::finite(1.0), CollapseSpec::finite(10.0)}) {
        for (int i = 0; i < 500; ++i) {
            double ta = u(rng);
            double tb = u(rng);
            if (decohered_before_bob({ta, tb}, g, c)) {
                EXPECT_TRUE(decohered_before_bob({ta, tb + u(rng)}, g, c));
            }
        }
    }
}

TEST(KinkCenter, predicted_values) {
    Geometry g;
    EXPECT_EQ(predicted_kink_center(g, CollapseSpec::infinite()), 0.0);
    EXPECT_NEAR(predicted_kink_center(g, CollapseSpec::finite(10.0)), 6.0, 1e-12);
    g.dist_a_to_b = 30.0;
    EXPECT_NEAR(predicted_kink_center(g, CollapseSpec::finite(10.0)), 3.0, 1e-12);
}

TEST(KinkCenter, matches_decoherence_threshold) {
    // Without jitter, decoherence switches on exactly when K crosses the center.
    for (double v : {0.5, 2.0, 10.0}) {
        Geometry g;
        auto c = CollapseSpec::finite(v);
        double center = predicted_kink_center(g, c);
        g.path_s_to_b = g.path_s_to_a + center + 1e-6;
        EXPECT_TRUE(decohered_before_bob(flight_times(g, 0.0, 0.0), g, c));
        g.path_s_to_b = g.path_s_to_a + center - 1e-6;
        EXPECT_FALSE(decohered_before_bob(flight_times(g, 0.0, 0.0), g, c));
    }
}

TEST(KinkWidth, scales_with_jitter) {
    Geometry g;
    EXPECT_NEAR(predicted_kink_width(g, 0.5e-9), 3e8 * 0.5e-9 * std::sqrt(2.0), 1e-12);
    EXPECT_EQ(predicted_kink_width(g, 0.0), 0.0);
}

TEST(Validation, rejects_bad_inputs) {
    Geometry g;
    g.c_eff = 0.0;
    EXPECT_THROW(g.validate(), std::invalid_argument);
    EXPECT_THROW(CollapseSpec::finite(0.0).validate(), std::invalid_argument);
    EXPECT_NO_THROW(CollapseSpec::infinite().validate());
}
