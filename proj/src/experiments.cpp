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

#include "rwsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rwsim/errors.hpp"

namespace rwsim {

namespace {

double z_score(double diff, double err) {
    if (err > 0.0) {
        return diff / err;
    }
    if (diff == 0.0) {
        return 0.0;
    }
    return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

KinkScan summed(const KinkScan &a, const KinkScan &b, Channel channel, double k) {
    if (a.scans.size() != b.scans.size()) {
        throw std::invalid_argument("summed: kink runs differ in length");
    }
    KinkScan out;
    for (std::size_t i = 0; i < a.scans.size(); ++i) {
        out.scans.push_back(sum_scans(a.scans[i], b.scans[i]));
    }
    out.curve = curve_from_scans(out.scans, channel, k);
    return out;
}

}  // namespace

Geometry alice_first_geometry(const ExperimentConfig &cfg) {
    Geometry g = cfg.geometry;
    double margin = std::max(10.0 * predicted_kink_width(g, cfg.noise.jitter_sigma),
                             0.1 * g.c_eff * cfg.coincidence.window);
    g.path_s_to_b = g.path_s_to_a + predicted_kink_center(g, cfg.collapse) + margin;
    return g;
}

WhichWayResult exp_remote_which_way(const ExperimentConfig &cfg, const RunOptions &opts) {
    WhichWayResult r;
    r.alice_removed = scan_fringes(cfg, AliceSetup::removed(), stream_seed(cfg.master_seed, run_tag::kAliceRemoved, 0),
                                   opts);
    r.v_alice_removed = fit_visibility(r.alice_removed, Channel::Total, cfg.interferometer.k);

    ExperimentConfig first = cfg;
    first.geometry = alice_first_geometry(cfg);
    r.alice_first = scan_fringes(first, AliceSetup::both(), stream_seed(cfg.master_seed, run_tag::kAliceFirst, 0),
                                 opts);
    r.v_alice_first = fit_visibility(r.alice_first, Channel::CoincAtd, cfg.interferometer.k);
    return r;
}

KinkResult exp_kink(const ExperimentConfig &cfg, const RunOptions &opts, std::uint64_t tag) {
    KinkResult r;
    r.channel = cfg.coincidence.enabled ? Channel::CoincSum : Channel::Total;
    r.predicted_center = predicted_kink_center(cfg.geometry, cfg.collapse);
    r.predicted_width = predicted_kink_width(cfg.geometry, cfg.noise.jitter_sigma);
    r.scan = kink_curve(cfg, AliceSetup::both(), r.channel, tag, opts);
    try {
        r.fit = fit_kink(r.scan.curve);
    } catch (const FitFailure &e) {
        r.failure = e.what();
        r.flat_level = e.kind() == FitFailureKind::NoKink ? e.flat_level() : 0.0;
    }
    return r;
}

QiSpeedResult exp_qi_speed(const ExperimentConfig &cfg, const Geometry &geometry_1, const Geometry &geometry_2,
                           const RunOptions &opts) {
    double d1 = geometry_1.dist_a_to_b;
    double d2 = geometry_2.dist_a_to_b;
    if (d1 == d2) {
        throw DegenerateGeometries("qispeed: both geometries have the same A-B distance");
    }
    QiSpeedResult r;
    ExperimentConfig run = cfg;
    run.geometry = geometry_1;
    r.kink_1 = exp_kink(run, opts, run_tag::kQiFirst);
    run.geometry = geometry_2;
    r.kink_2 = exp_kink(run, opts, run_tag::kQiSecond);
    if (!r.kink_1.fit || !r.kink_2.fit) {
        throw UnresolvedKink("qispeed: kink not resolved (" +
                             (r.kink_1.fit ? r.kink_2.failure : r.kink_1.failure) + ")");
    }
    const Estimate &k1 = r.kink_1.fit->center;
    const Estimate &k2 = r.kink_2.fit->center;
    r.delta_k = std::hypot(k1.std_err, k2.std_err);
    // A center inside its own transition width is indistinguishable from
    // simultaneous arrival: the fitted center carries a bias of that order.
    if (k1.value > 3.0 * k1.std_err && k1.value > r.kink_1.fit->width.value) {
        r.v_qi_single = d1 / k1.value;
    }
    double dk = k1.value - k2.value;
    if ((d1 - d2) / dk > 0.0 && std::abs(dk) > r.delta_k) {
        r.v_qi_diff = (d1 - d2) / dk;
    }
    r.v_qi_min_bound =
        r.delta_k > 0.0 ? std::abs(d1 - d2) / r.delta_k : std::numeric_limits<double>::infinity();
    return r;
}

CoherenceCase exp_coherence_case(const ExperimentConfig &cfg, AdPosition position, const RunOptions &opts) {
    ExperimentConfig first = cfg;
    first.geometry = alice_first_geometry(cfg);
    bool out = position == AdPosition::Out;
    AliceSetup alice = out ? AliceSetup::recombined() : AliceSetup::both();
    std::uint64_t tag = out ? run_tag::kCoherenceOut : run_tag::kCoherenceInArm;
    CoherenceCase c;
    c.scan = scan_fringes(first, alice, stream_seed(cfg.master_seed, tag, 0), opts);
    c.visibility = fit_visibility(c.scan, Channel::CoincSum, cfg.interferometer.k);
    return c;
}

CoherenceResult exp_coherence_test(const ExperimentConfig &cfg, const RunOptions &opts) {
    return {exp_coherence_case(cfg, AdPosition::Out, opts), exp_coherence_case(cfg, AdPosition::InArm, opts)};
}

CurveAmplitude curve_amplitude(const KinkCurve &curve) {
    try {
        KinkFit fit = fit_kink(curve);
        return {fit.amplitude, fit};
    } catch (const FitFailure &) {
        return {plateau_contrast(curve).amplitude, std::nullopt};
    }
}

FringeScan sum_scans(const FringeScan &a, const FringeScan &b) {
    if (a.points.size() != b.points.size()) {
        throw std::invalid_argument("sum_scans: scans differ in length");
    }
    FringeScan out = a;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        if (a.points[i].delta_r != b.points[i].delta_r ||
            a.points[i].path_difference != b.points[i].path_difference) {
            throw std::invalid_argument("sum_scans: scans are on different grids");
        }
        out.points[i].counts += b.points[i].counts;
    }
    return out;
}

double max_pointwise_z(const KinkCurve &a, const KinkCurve &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("max_pointwise_z: curves differ in length");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto &va = a[i].visibility;
        const auto &vb = b[i].visibility;
        worst = std::max(worst, std::abs(z_score(va.visibility - vb.visibility, std::hypot(va.std_err, vb.std_err))));
    }
    return worst;
}

CommutationResult exp_commutation(const ExperimentConfig &cfg, const RunOptions &opts) {
    const double k = cfg.interferometer.k;
    CommutationResult r;

    ExperimentConfig on = cfg;
    on.coincidence.enabled = true;
    r.v_t = kink_curve(on, AliceSetup::atd_only(), Channel::CoincAtd, run_tag::kCommutationT, opts);
    r.v_r = kink_curve(on, AliceSetup::ard_only(), Channel::CoincArd, run_tag::kCommutationR, opts);
    r.v_t_plus_r = summed(r.v_t, r.v_r, Channel::CoincSum, k);

    ExperimentConfig off = cfg;
    off.coincidence.enabled = false;
    r.coinc_off = kink_curve(off, AliceSetup::both(), Channel::Total, run_tag::kCommutationOff, opts);

    r.amp_t = curve_amplitude(r.v_t.curve);
    r.amp_r = curve_amplitude(r.v_r.curve);
    r.amp_on = curve_amplitude(r.v_t_plus_r.curve);
    r.amp_off = curve_amplitude(r.coinc_off.curve);

    r.eq14_max_z = max_pointwise_z(r.v_t.curve, r.v_r.curve);
    r.eq15_max_z = std::max(max_pointwise_z(r.v_t.curve, r.v_t_plus_r.curve),
                            max_pointwise_z(r.v_r.curve, r.v_t_plus_r.curve));
    r.eq14_consistent = r.eq14_max_z <= 3.0;
    r.eq15_consistent = r.eq14_consistent && r.eq15_max_z <= 3.0;

    const Estimate &a_on = r.amp_on.amplitude;
    const Estimate &a_off = r.amp_off.amplitude;
    r.ineq16_z_on_minus_off = z_score(a_on.value - a_off.value, std::hypot(a_on.std_err, a_off.std_err));
    r.ineq16_z_off = z_score(a_off.value, a_off.std_err);
    r.ineq16_holds = r.ineq16_z_on_minus_off > 3.0 && r.ineq16_z_off > 3.0;
    return r;
}

}  // namespace rwsim
