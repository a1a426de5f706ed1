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
#include <optional>
#include <string>

#include "rwsim/montecarlo.hpp"

namespace rwsim {

/// Stream tags; each run of a driver draws from its own stream of the master seed.
namespace run_tag {
inline constexpr std::uint64_t kAliceRemoved = 1;
inline constexpr std::uint64_t kAliceFirst = 2;
inline constexpr std::uint64_t kKink = 3;
inline constexpr std::uint64_t kCommutationT = 4;
inline constexpr std::uint64_t kCommutationR = 5;
inline constexpr std::uint64_t kCommutationOff = 6;
inline constexpr std::uint64_t kCoherenceOut = 7;
inline constexpr std::uint64_t kCoherenceInArm = 8;
inline constexpr std::uint64_t kQiFirst = 9;
inline constexpr std::uint64_t kQiSecond = 10;
}  // namespace run_tag

/// Geometry in which Alice's collapse reaches Bob well before his photon,
/// while both clicks still fall inside the coincidence window.
Geometry alice_first_geometry(const ExperimentConfig &cfg);

struct WhichWayResult {
    FringeScan alice_removed;
    FringeScan alice_first;
    VisibilityEstimate v_alice_removed;  // unconditional counts
    VisibilityEstimate v_alice_first;    // ATD-coincident counts
};

WhichWayResult exp_remote_which_way(const ExperimentConfig &cfg, const RunOptions &opts = {});

struct KinkResult {
    KinkScan scan;
    Channel channel = Channel::CoincSum;
    std::optional<KinkFit> fit;
    std::string failure;  // set when the fit failed
    double flat_level = 0.0;
    double predicted_center = 0.0;
    double predicted_width = 0.0;
};

/// Visibility kink over `cfg.kink_grid` with both of Alice's detectors
/// active. Reads the coincidence sum, or raw counts when coincidences are off.
KinkResult exp_kink(const ExperimentConfig &cfg, const RunOptions &opts = {},
                    std::uint64_t tag = run_tag::kKink);

/// Speeds are in units of c_eff.
struct QiSpeedResult {
    KinkResult kink_1;
    KinkResult kink_2;
    std::optional<double> v_qi_single;  // from geometry 1 alone
    std::optional<double> v_qi_diff;    // from the parallel shift
    double v_qi_min_bound = 0.0;
    double delta_k = 0.0;               // uncertainty of K1 - K2
};

/// Throws DegenerateGeometries when both geometries share dist_a_to_b and
/// UnresolvedKink when either kink cannot be fitted.
QiSpeedResult exp_qi_speed(const ExperimentConfig &cfg, const Geometry &geometry_1, const Geometry &geometry_2,
                           const RunOptions &opts = {});

enum class AdPosition { Out, InArm };

struct CoherenceCase {
    FringeScan scan;
    VisibilityEstimate visibility;
};

struct CoherenceResult {
    CoherenceCase case_out;     // recombined-beam detection
    CoherenceCase case_in_arm;  // one arm blocked by the additional detector
};

CoherenceCase exp_coherence_case(const ExperimentConfig &cfg, AdPosition position, const RunOptions &opts = {});
CoherenceResult exp_coherence_test(const ExperimentConfig &cfg, const RunOptions &opts = {});

/// Kink amplitude from the fit when a kink exists, otherwise the plateau contrast.
struct CurveAmplitude {
    Estimate amplitude;
    std::optional<KinkFit> fit;
};

CurveAmplitude curve_amplitude(const KinkCurve &curve);

struct CommutationResult {
    KinkScan v_t;             // ATD-coincident, ARD removed
    KinkScan v_r;             // ARD-coincident, ATD removed
    KinkScan v_t_plus_r;      // sum of the two runs above
    KinkScan coinc_off;       // both detectors, coincidences off, raw counts
    CurveAmplitude amp_t;
    CurveAmplitude amp_r;
    CurveAmplitude amp_on;
    CurveAmplitude amp_off;
    bool eq14_consistent = false;
    bool eq15_consistent = false;
    bool ineq16_holds = false;
    double eq14_max_z = 0.0;
    double eq15_max_z = 0.0;
    double ineq16_z_on_minus_off = 0.0;
    double ineq16_z_off = 0.0;
};

CommutationResult exp_commutation(const ExperimentConfig &cfg, const RunOptions &opts = {});

/// Point-by-point sum of two scans over the same grid.
FringeScan sum_scans(const FringeScan &a, const FringeScan &b);

/// Largest |V_a - V_b| / combined std error over two curves on the same K grid.
double max_pointwise_z(const KinkCurve &a, const KinkCurve &b);

}  // namespace rwsim
