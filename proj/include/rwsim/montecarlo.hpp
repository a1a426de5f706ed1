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
#include <span>
#include <vector>

#include "rwsim/experiment_config.hpp"
#include "rwsim/fit.hpp"

namespace rwsim {

enum class AliceMode {
    Removed,                // detectors taken away; no measurement
    Projective,             // polarization measured behind her splitter
    CoherentRecombination,  // her beams recombined before detection; no projection
};

/// What Alice does during a run. A removed detector still leaves the
/// measurement projective; only its clicks are lost.
struct AliceSetup {
    AliceMode mode = AliceMode::Projective;
    bool atd_active = true;
    bool ard_active = true;

    static AliceSetup removed() {
        return {AliceMode::Removed, false, false};
    }
    static AliceSetup both() {
        return {};
    }
    static AliceSetup atd_only() {
        return {AliceMode::Projective, true, false};
    }
    static AliceSetup ard_only() {
        return {AliceMode::Projective, false, true};
    }
    static AliceSetup recombined() {
        return {AliceMode::CoherentRecombination, true, false};
    }
};

struct RunOptions {
    int workers = 0;  // 0 = OpenMP default
};

/// Per-trial probabilities and constants precomputed from a config at a
/// fixed delta_r and geometry.
struct TrialModel {
    Geometry geometry;
    CollapseSpec collapse;
    AliceSetup alice;
    CoincidenceSpec coincidence;
    double p_noise = 0.0;
    double p_noise_click = 0.0;
    double p_alice_h = 0.5;
    double p_bob_coherent = 0.0;
    double p_bob_after_atd = 0.0;
    double p_bob_after_ard = 0.0;
    double efficiency_atd = 1.0;
    double efficiency_ard = 1.0;
    double efficiency_fd = 1.0;
    double p_dark = 0.0;
    double dark_span = 0.0;
    double jitter_sigma = 0.0;

    static TrialModel build(const ExperimentConfig &cfg, const AliceSetup &alice);
};

enum class Origin { SignalPair, NoiseSingle, Dark };

struct AliceClick {
    AliceDetector detector;
    double time;
};

struct TrialOutcome {
    std::optional<AliceClick> alice_click;
    std::optional<double> bob_click;
    Origin origin = Origin::SignalPair;  // Dark when Bob's click is a dark count
    bool decohered_at_bob = false;
};

/// Aggregated counts of one batch. All fields are plain sums, so merging
/// is associative and commutative.
struct BatchCounts {
    std::uint64_t n_trials = 0;
    std::uint64_t counts_total = 0;
    std::uint64_t counts_coinc_atd = 0;
    std::uint64_t counts_coinc_ard = 0;
    std::uint64_t alice_atd = 0;
    std::uint64_t alice_ard = 0;
    std::uint64_t noise_trials = 0;
    std::uint64_t decohered_trials = 0;

    void add(const TrialOutcome &outcome, const CoincidenceSpec &coincidence);
    BatchCounts &operator+=(const BatchCounts &other);
    bool operator==(const BatchCounts &) const = default;
};

TrialOutcome run_trial(const TrialModel &model, std::uint64_t trial_seed);
TrialOutcome run_trial(const ExperimentConfig &cfg, const AliceSetup &alice, std::uint64_t trial_seed);

/// Trial i draws from derive_seed(stream_seed, i).
BatchCounts run_batch_serial(const TrialModel &model, std::uint64_t stream_seed, std::uint64_t n_trials);
/// OpenMP version of run_batch_serial; bit-identical for any worker count.
BatchCounts run_batch(const TrialModel &model, std::uint64_t stream_seed, std::uint64_t n_trials,
                      const RunOptions &opts = {});

struct FringePoint {
    double path_difference;  // K
    double delta_r;
    BatchCounts counts;
};

struct FringeScan {
    std::vector<FringePoint> points;
};

enum class Channel { Total, CoincAtd, CoincArd, CoincSum };

std::uint64_t channel_counts(const BatchCounts &counts, Channel channel);
std::vector<double> channel_values(const FringeScan &scan, Channel channel);

/// Throws GridTooCoarse unless the grid has >= 8 points and spans a full period.
void check_fringe_grid(std::span<const double> delta_r_grid, double k);

/// Seed of the stream used by one run (tag) at one K index.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t run_tag, std::uint64_t k_index);

/// One fresh batch per delta_r point of `cfg.delta_r_grid`, at the config's geometry.
FringeScan scan_fringes(const ExperimentConfig &cfg, const AliceSetup &alice, std::uint64_t stream,
                        const RunOptions &opts = {});

VisibilityEstimate fit_visibility(const FringeScan &scan, Channel channel, double k);

struct KinkScan {
    std::vector<FringeScan> scans;  // one per K value
    KinkCurve curve;
};

/// Visibility versus K: |S-B| is set to |S-A| + K for each value of `cfg.kink_grid`.
KinkScan kink_curve(const ExperimentConfig &cfg, const AliceSetup &alice, Channel channel, std::uint64_t run_tag,
                    const RunOptions &opts = {});

/// Re-fit every scan of a kink run on another channel.
KinkCurve curve_from_scans(const std::vector<FringeScan> &scans, Channel channel, double k);

}  // namespace rwsim
