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

#include "rwsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rwsim/errors.hpp"
#include "rwsim/rng.hpp"

namespace rwsim {

namespace {

double bob_probability_after(const ExperimentConfig &cfg, const SplitState &joint, AliceDetector click) {
    const auto &ifm = cfg.interferometer;
    if (cfg.model == StateModel::PaperReduced) {
        return conditional_fd_probability(cfg.source.matching_type, click, ifm, cfg.bs_b);
    }
    Pol pol = click == AliceDetector::ATD ? Pol::H : Pol::V;
    if (probability_of(Subspace::alice(pol), joint.state) < kZeroProbability) {
        return 0.0;  // outcome never sampled
    }
    return fd_probability(bob_local_state(joint, click, cfg.model, cfg.source.matching_type, cfg.bs_b), ifm,
                          cfg.bs_b);
}

double clamp01(double p) {
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TrialModel TrialModel::build(const ExperimentConfig &cfg, const AliceSetup &alice) {
    SplitState joint = split_joint_state(cfg.source, cfg.bs_a, cfg.bs_b, cfg.model);
    const auto &ifm = cfg.interferometer;

    TrialModel m;
    m.geometry = cfg.geometry;
    m.collapse = cfg.collapse;
    m.alice = alice;
    m.coincidence = cfg.coincidence;
    m.p_noise = cfg.noise.epsilon / (1.0 + cfg.noise.epsilon);
    m.p_noise_click =
        clamp01(fd_probability(ArmDensity{0.5, 0.5, {0.5 * cfg.noise.noise_fringe_visibility, 0.0}}, ifm));
    m.p_alice_h = cfg.model == StateModel::PaperReduced ? cfg.bs_a.tau * cfg.bs_a.tau
                                                        : probability_of(Subspace::alice(Pol::H), joint.state);
    m.p_bob_coherent = clamp01(fd_probability(
        bob_local_state(joint, std::nullopt, cfg.model, cfg.source.matching_type, cfg.bs_b), ifm, cfg.bs_b));
    m.p_bob_after_atd = clamp01(bob_probability_after(cfg, joint, AliceDetector::ATD));
    m.p_bob_after_ard = clamp01(bob_probability_after(cfg, joint, AliceDetector::ARD));
    m.efficiency_atd = cfg.noise.efficiency_atd;
    m.efficiency_ard = cfg.noise.efficiency_ard;
    m.efficiency_fd = cfg.noise.efficiency_fd;
    m.p_dark = -std::expm1(-cfg.noise.dark_rate);
    m.dark_span = std::max(cfg.geometry.path_s_to_a, cfg.geometry.path_s_to_b) / cfg.geometry.c_eff +
                  cfg.coincidence.window;
    m.jitter_sigma = cfg.noise.jitter_sigma;
    return m;
}

void BatchCounts::add(const TrialOutcome &outcome, const CoincidenceSpec &coincidence) {
    ++n_trials;
    if (outcome.origin == Origin::NoiseSingle) {
        ++noise_trials;
    }
    if (outcome.decohered_at_bob) {
        ++decohered_trials;
    }
    if (outcome.alice_click) {
        ++(outcome.alice_click->detector == AliceDetector::ATD ? alice_atd : alice_ard);
    }
    if (!outcome.bob_click) {
        return;
    }
    ++counts_total;
    if (coincidence.enabled && outcome.alice_click &&
        std::abs(outcome.alice_click->time - *outcome.bob_click) <= coincidence.window) {
        ++(outcome.alice_click->detector == AliceDetector::ATD ? counts_coinc_atd : counts_coinc_ard);
    }
}

BatchCounts &BatchCounts::operator+=(const BatchCounts &other) {
    n_trials += other.n_trials;
    counts_total += other.counts_total;
    counts_coinc_atd += other.counts_coinc_atd;
    counts_coinc_ard += other.counts_coinc_ard;
    alice_atd += other.alice_atd;
    alice_ard += other.alice_ard;
    noise_trials += other.noise_trials;
    decohered_trials += other.decohered_trials;
    return *this;
}

TrialOutcome run_trial(const TrialModel &m, std::uint64_t trial_seed) {
    TrialRng rng(trial_seed);
    TrialOutcome out;

    bool noise_single = m.p_noise > 0.0 && rng.bernoulli(m.p_noise);
    double jitter_a = 0.0;
    double jitter_b = 0.0;
    if (m.jitter_sigma > 0.0) {
        std::normal_distribution<double> jitter(0.0, m.jitter_sigma);
        jitter_a = jitter(rng);
        jitter_b = jitter(rng);
    }
    EventTimes t = flight_times(m.geometry, jitter_a, jitter_b);

    double p_bob;
    if (noise_single) {
        out.origin = Origin::NoiseSingle;
        p_bob = m.p_noise_click;
    } else {
        out.origin = Origin::SignalPair;
        p_bob = m.p_bob_coherent;
        switch (m.alice.mode) {
            case AliceMode::Removed:
                break;
            case AliceMode::Projective: {
                AliceDetector outcome = rng.bernoulli(m.p_alice_h) ? AliceDetector::ATD : AliceDetector::ARD;
                bool transmitted = outcome == AliceDetector::ATD;
                out.decohered_at_bob = decohered_before_bob(t, m.geometry, m.collapse);
                if (out.decohered_at_bob) {
                    p_bob = transmitted ? m.p_bob_after_atd : m.p_bob_after_ard;
                }
                bool active = transmitted ? m.alice.atd_active : m.alice.ard_active;
                double efficiency = transmitted ? m.efficiency_atd : m.efficiency_ard;
                if (active && rng.bernoulli(efficiency)) {
                    out.alice_click = AliceClick{outcome, t.tau_a};
                }
                break;
            }
            case AliceMode::CoherentRecombination:
                if (m.alice.atd_active && rng.bernoulli(m.efficiency_atd)) {
                    out.alice_click = AliceClick{AliceDetector::ATD, t.tau_a};
                }
                break;
        }
    }
    if (rng.bernoulli(p_bob * m.efficiency_fd)) {
        out.bob_click = t.tau_b;
    }

    if (m.p_dark > 0.0) {
        if (!out.bob_click && rng.bernoulli(m.p_dark)) {
            out.bob_click = rng.uniform() * m.dark_span;
            out.origin = Origin::Dark;
        }
        if (m.alice.mode != AliceMode::Removed) {
            for (AliceDetector d : {AliceDetector::ATD, AliceDetector::ARD}) {
                bool active = d == AliceDetector::ATD ? m.alice.atd_active : m.alice.ard_active;
                if (active && !out.alice_click && rng.bernoulli(m.p_dark)) {
                    out.alice_click = AliceClick{d, rng.uniform() * m.dark_span};
                }
            }
        }
    }
    return out;
}

TrialOutcome run_trial(const ExperimentConfig &cfg, const AliceSetup &alice, std::uint64_t trial_seed) {
    return run_trial(TrialModel::build(cfg, alice), trial_seed);
}

BatchCounts run_batch_serial(const TrialModel &model, std::uint64_t stream_seed, std::uint64_t n_trials) {
    BatchCounts counts;
    for (std::uint64_t i = 0; i < n_trials; ++i) {
        counts.add(run_trial(model, derive_seed(stream_seed, i)), model.coincidence);
    }
    return counts;
}

BatchCounts run_batch(const TrialModel &model, std::uint64_t stream_seed, std::uint64_t n_trials,
                      const RunOptions &opts) {
#ifdef _OPENMP
    int workers = opts.workers > 0 ? opts.workers : omp_get_max_threads();
    std::uint64_t total = 0, coinc_atd = 0, coinc_ard = 0, alice_atd = 0, alice_ard = 0, noise = 0,
                  decohered = 0;
    const auto n = static_cast<std::int64_t>(n_trials);
#pragma omp parallel for num_threads(workers) schedule(static) \
    reduction(+ : total, coinc_atd, coinc_ard, alice_atd, alice_ard, noise, decohered)
    for (std::int64_t i = 0; i < n; ++i) {
        BatchCounts one;
        one.add(run_trial(model, derive_seed(stream_seed, static_cast<std::uint64_t>(i))), model.coincidence);
        total += one.counts_total;
        coinc_atd += one.counts_coinc_atd;
        coinc_ard += one.counts_coinc_ard;
        alice_atd += one.alice_atd;
        alice_ard += one.alice_ard;
        noise += one.noise_trials;
        decohered += one.decohered_trials;
    }
    return {n_trials, total, coinc_atd, coinc_ard, alice_atd, alice_ard, noise, decohered};
#else
    (void)opts;
    return run_batch_serial(model, stream_seed, n_trials);
#endif
}

std::uint64_t channel_counts(const BatchCounts &counts, Channel channel) {
    switch (channel) {
        case Channel::Total:
            return counts.counts_total;
        case Channel::CoincAtd:
            return counts.counts_coinc_atd;
        case Channel::CoincArd:
            return counts.counts_coinc_ard;
        case Channel::CoincSum:
            return counts.counts_coinc_atd + counts.counts_coinc_ard;
    }
    return 0;
}

std::vector<double> channel_values(const FringeScan &scan, Channel channel) {
    std::vector<double> out;
    out.reserve(scan.points.size());
    for (const auto &p : scan.points) {
        out.push_back(static_cast<double>(channel_counts(p.counts, channel)));
    }
    return out;
}

void check_fringe_grid(std::span<const double> delta_r_grid, double k) {
    if (delta_r_grid.size() < 8) {
        throw GridTooCoarse("delta_r grid needs at least 8 points, got " + std::to_string(delta_r_grid.size()));
    }
    auto [lo, hi] = std::minmax_element(delta_r_grid.begin(), delta_r_grid.end());
    if (std::abs(k) * (*hi - *lo) < 2.0 * M_PI * (1.0 - 1e-9)) {
        throw GridTooCoarse("delta_r grid spans less than one fringe period");
    }
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t run_tag, std::uint64_t k_index) {
    return derive_seed(derive_seed(master_seed, run_tag), k_index);
}

FringeScan scan_fringes(const ExperimentConfig &cfg, const AliceSetup &alice, std::uint64_t stream,
                        const RunOptions &opts) {
    check_fringe_grid(cfg.delta_r_grid, cfg.interferometer.k);
    FringeScan scan;
    scan.points.reserve(cfg.delta_r_grid.size());
    ExperimentConfig point_cfg = cfg;
    for (std::size_t i = 0; i < cfg.delta_r_grid.size(); ++i) {
        point_cfg.interferometer.delta_r = cfg.delta_r_grid[i];
        TrialModel model = TrialModel::build(point_cfg, alice);
        scan.points.push_back({cfg.geometry.path_difference(), cfg.delta_r_grid[i],
                               run_batch(model, derive_seed(stream, i), cfg.trials_per_point, opts)});
    }
    return scan;
}

VisibilityEstimate fit_visibility(const FringeScan &scan, Channel channel, double k) {
    std::vector<double> x;
    x.reserve(scan.points.size());
    for (const auto &p : scan.points) {
        x.push_back(p.delta_r);
    }
    std::vector<double> y = channel_values(scan, channel);
    return fit_visibility(x, y, k);
}

KinkScan kink_curve(const ExperimentConfig &cfg, const AliceSetup &alice, Channel channel, std::uint64_t run_tag,
                    const RunOptions &opts) {
    KinkScan out;
    out.scans.reserve(cfg.kink_grid.size());
    ExperimentConfig point_cfg = cfg;
    for (std::size_t i = 0; i < cfg.kink_grid.size(); ++i) {
        point_cfg.geometry.path_s_to_b = cfg.geometry.path_s_to_a + cfg.kink_grid[i];
        FringeScan scan = scan_fringes(point_cfg, alice, stream_seed(cfg.master_seed, run_tag, i), opts);
        for (auto &p : scan.points) {
            p.path_difference = cfg.kink_grid[i];  // exact grid value, not (a + K) - a
        }
        out.scans.push_back(std::move(scan));
    }
    out.curve = curve_from_scans(out.scans, channel, cfg.interferometer.k);
    return out;
}

KinkCurve curve_from_scans(const std::vector<FringeScan> &scans, Channel channel, double k) {
    KinkCurve curve;
    curve.reserve(scans.size());
    for (const auto &scan : scans) {
        double path_difference = scan.points.empty() ? 0.0 : scan.points.front().path_difference;
        curve.push_back({path_difference, fit_visibility(scan, channel, k)});
    }
    return curve;
}

}  // namespace rwsim
