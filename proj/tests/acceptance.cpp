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

// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with
// the measured statistics; the exit status is non-zero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rwsim/errors.hpp"
#include "rwsim/experiments.hpp"
#include "rwsim/output.hpp"

using namespace rwsim;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kVisHigh = 0.97;
constexpr double kVisLow = 0.03;
constexpr double kConditionalRate = 0.25;
constexpr double kConditionalTol = 0.01;
constexpr double kCenterTol = 0.15;    // metres
constexpr double kWidthRelTol = 0.20;
constexpr double kSpeedRelTol = 0.15;
constexpr double kZ = 3.0;
constexpr double kOracleSigmas = 5.0;
constexpr int kOracleConfigs = 50;
constexpr int kOracleRequired = 48;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

ExperimentConfig ideal() {
    ExperimentConfig cfg;
    cfg.model = StateModel::PaperReduced;
    cfg.noise.jitter_sigma = 0.5e-9;
    cfg.trials_per_point = 20000;
    cfg.delta_r_grid = linspace(0.0, 800e-9, 16);
    cfg.kink_grid = linspace(-3.0, 3.0, 61);
    cfg.master_seed = 20240601;
    return cfg;
}

Verdict remote_which_way() {
    auto r = exp_remote_which_way(ideal());
    bool ok = r.v_alice_removed.visibility >= kVisHigh && r.v_alice_first.visibility <= kVisLow;
    return {ok, fmt("V_alice_removed=%.4f (>= %.2f), V_alice_first=%.4f (<= %.2f)", r.v_alice_removed.visibility,
                    kVisHigh, r.v_alice_first.visibility, kVisLow)};
}

Verdict conditional_rate() {
    bool ok = true;
    std::string detail;
    for (auto type : {MatchingType::TypeI, MatchingType::TypeII}) {
        auto cfg = ideal();
        cfg.source.matching_type = type;
        cfg.trials_per_point = 100000;
        cfg.geometry = alice_first_geometry(cfg);
        auto scan = scan_fringes(cfg, AliceSetup::both(), stream_seed(cfg.master_seed, 100, 0));
        double worst = 0.0;
        for (const auto &p : scan.points) {
            double f = static_cast<double>(p.counts.counts_coinc_atd) / static_cast<double>(p.counts.alice_atd);
            worst = std::max(worst, std::abs(f - kConditionalRate));
        }
        ok = ok && worst <= kConditionalTol;
        detail += fmt("%s max|f-0.25|=%.4f; ", to_string(type), worst);
    }
    return {ok, detail + fmt("tolerance %.2f at every delta_r", kConditionalTol)};
}

Verdict kink_recovery() {
    auto r = exp_kink(ideal());
    if (!r.fit) {
        return {false, "kink fit failed: " + r.failure};
    }
    double rel = r.fit->width.value / r.predicted_width - 1.0;
    bool ok = std::abs(r.fit->center.value) <= kCenterTol && std::abs(rel) <= kWidthRelTol;
    return {ok, fmt("center=%.4f+-%.4f m (|.| <= %.2f), width=%.4f m vs c*sigma*sqrt2=%.4f (%+.1f%%, limit %.0f%%)",
                    r.fit->center.value, r.fit->center.std_err, kCenterTol, r.fit->width.value, r.predicted_width,
                    100.0 * rel, 100.0 * kWidthRelTol)};
}

Verdict qi_speed() {
    auto cfg = ideal();
    cfg.collapse = CollapseSpec::finite(10.0);
    cfg.kink_grid = linspace(1.5, 7.5, 61);
    Geometry g1 = cfg.geometry;
    g1.dist_a_to_b = 60.0;
    Geometry g2 = cfg.geometry;
    g2.dist_a_to_b = 30.0;
    QiSpeedResult r;
    try {
        r = exp_qi_speed(cfg, g1, g2);
    } catch (const Error &e) {
        return {false, std::string("qispeed failed: ") + e.what()};
    }
    auto within = [](const std::optional<double> &v) {
        return v && std::abs(*v / 10.0 - 1.0) <= kSpeedRelTol;
    };
    bool diff_ok = within(r.v_qi_diff);
    bool single_ok = within(r.v_qi_single);
    bool bound_ok = r.v_qi_diff && r.v_qi_min_bound <= *r.v_qi_diff;
    return {diff_ok && single_ok && bound_ok,
            fmt("v_qi_diff=%.3fc [%s], v_qi_single=%.3fc [%s], v_qi_min_bound=%.1fc <= v_qi_diff [%s] "
                "(delta_K=%.4f m, K1=%.4f m, K2=%.4f m)",
                r.v_qi_diff.value_or(NAN), diff_ok ? "ok" : "off", r.v_qi_single.value_or(NAN),
                single_ok ? "ok" : "off", r.v_qi_min_bound, bound_ok ? "ok" : "violated", r.delta_k,
                r.kink_1.fit->center.value, r.kink_2.fit->center.value)};
}

Verdict coherence() {
    auto r = exp_coherence_test(ideal());
    bool ok = r.case_out.visibility.visibility >= kVisHigh && r.case_in_arm.visibility.visibility <= kVisLow;
    return {ok, fmt("V_case0=%.4f (>= %.2f), V_caseI=%.4f (<= %.2f)", r.case_out.visibility.visibility, kVisHigh,
                    r.case_in_arm.visibility.visibility, kVisLow)};
}

double max_visibility(const KinkCurve &curve) {
    double m = 0.0;
    for (const auto &p : curve) {
        m = std::max(m, p.visibility.visibility);
    }
    return m;
}

Verdict commutation() {
    auto cfg = ideal();
    cfg.noise.epsilon = 0.05;
    auto reduced = exp_commutation(cfg);
    bool reduced_ok = reduced.eq14_consistent && reduced.eq15_consistent && reduced.ineq16_holds;

    cfg.model = StateModel::ProductPreselected;
    auto product = exp_commutation(cfg);
    const auto &a = product.amp_off.amplitude;
    bool product_ok = std::abs(a.value) <= kZ * a.std_err;

    cfg.model = StateModel::NonReducedBell;
    auto bell = exp_commutation(cfg);
    double bell_t = max_visibility(bell.v_t.curve);
    double bell_r = max_visibility(bell.v_r.curve);
    double bell_on = max_visibility(bell.v_t_plus_r.curve);
    double bell_off = max_visibility(bell.coinc_off.curve);
    bool bell_ok = std::max({bell_t, bell_r, bell_on, bell_off}) <= kVisLow;

    return {reduced_ok && product_ok && bell_ok,
            fmt("PaperReduced eps=0.05: eq14=%d (max z %.2f) eq15=%d (max z %.2f) ineq16=%d (z_on-off %.1f, z_off "
                "%.1f) [%s]; ProductPreselected coinc-off amplitude=%.4f+-%.4f [%s]; NonReducedBell max V: T=%.4f "
                "R=%.4f T+R=%.4f coinc-off=%.4f (<= %.2f) [%s]",
                reduced.eq14_consistent, reduced.eq14_max_z, reduced.eq15_consistent, reduced.eq15_max_z,
                reduced.ineq16_holds, reduced.ineq16_z_on_minus_off, reduced.ineq16_z_off,
                reduced_ok ? "ok" : "off", a.value, a.std_err, product_ok ? "ok" : "off", bell_t, bell_r, bell_on,
                bell_off, kVisLow, bell_ok ? "ok" : "off")};
}

// Closed-form click probabilities straight from the optics layer.
double coherent_probability(const ExperimentConfig &cfg) {
    auto joint = split_joint_state(cfg.source, cfg.bs_a, cfg.bs_b, cfg.model);
    return fd_probability(bob_local_state(joint, std::nullopt, cfg.model, cfg.source.matching_type, cfg.bs_b),
                          cfg.interferometer, cfg.bs_b);
}

double conditional_probability(const ExperimentConfig &cfg) {
    auto joint = split_joint_state(cfg.source, cfg.bs_a, cfg.bs_b, cfg.model);
    return fd_probability(
        bob_local_state(joint, AliceDetector::ATD, cfg.model, cfg.source.matching_type, cfg.bs_b), cfg.interferometer,
        cfg.bs_b);
}

bool within_sigmas(std::uint64_t hits, std::uint64_t n, double p) {
    double sd = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
    double f = static_cast<double>(hits) / static_cast<double>(n);
    return std::abs(f - p) <= kOracleSigmas * sd + 1e-12;
}

Verdict oracle_equivalence() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0;
    const std::uint64_t n = 20000;
    for (int i = 0; i < kOracleConfigs; ++i) {
        auto cfg = ideal();
        cfg.noise.jitter_sigma = 0.0;
        cfg.source.matching_type = u(rng) < 0.5 ? MatchingType::TypeI : MatchingType::TypeII;
        cfg.source.phi_deg = u(rng) < 0.5 ? 45.0 : 135.0;
        cfg.model = static_cast<StateModel>(i % 3);
        cfg.bs_a.tau = 0.2 + 0.6 * u(rng);
        cfg.bs_a.rho = std::sqrt(1.0 - cfg.bs_a.tau * cfg.bs_a.tau);
        cfg.bs_b.tau = 0.2 + 0.6 * u(rng);
        cfg.bs_b.rho = std::sqrt(1.0 - cfg.bs_b.tau * cfg.bs_b.tau);
        cfg.bs_b.phase_t = 2.0 * M_PI * u(rng);
        cfg.interferometer.zeta = 0.1 * u(rng);
        cfg.interferometer.eta = (1.0 - cfg.interferometer.zeta) / 2.0 * (0.5 + 0.5 * u(rng));
        cfg.interferometer.delta_r = 800e-9 * u(rng);
        cfg.interferometer.theta_0 = 2.0 * M_PI * u(rng);

        auto removed = run_batch(TrialModel::build(cfg, AliceSetup::removed()), rng(), n);
        bool ok = within_sigmas(removed.counts_total, n, coherent_probability(cfg));

        auto first = cfg;
        first.geometry = alice_first_geometry(cfg);
        auto measured = run_batch(TrialModel::build(first, AliceSetup::both()), rng(), n);
        if (measured.alice_atd > 0) {
            ok = ok && within_sigmas(measured.counts_coinc_atd, measured.alice_atd, conditional_probability(cfg));
        }
        agree += ok;
    }
    return {agree >= kOracleRequired,
            fmt("%d/%d randomized configs within %.0f binomial sd (need >= %d)", agree, kOracleConfigs,
                kOracleSigmas, kOracleRequired)};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict determinism() {
    auto cfg = ideal();
    cfg.noise.epsilon = 0.05;
    cfg.noise.dark_rate = 1e-3;
    fs::path root = fs::temp_directory_path() / "rwsim_acceptance_determinism";
    fs::remove_all(root);
    std::string reference;
    bool ok = true;
    for (int workers : {1, 4, 8}) {
        auto bundle = make_bundle(exp_kink(cfg, {workers}));
        auto manifest = make_manifest(cfg, "kink");
        fs::path dir = root / std::to_string(workers);
        write_outputs(bundle, manifest, dir);
        std::string csv = slurp(dir / "kink.csv");
        if (reference.empty()) {
            reference = csv;
        } else {
            ok = ok && csv == reference;
        }
    }
    fs::remove_all(root);
    return {ok && !reference.empty(),
            fmt("kink.csv (%zu bytes) byte-identical across 1, 4 and 8 workers: %s", reference.size(),
                ok ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
        {"1 remote which-way", remote_which_way},
        {"2 conditional rate", conditional_rate},
        {"3 kink recovery", kink_recovery},
        {"4 v_QI injection recovery", qi_speed},
        {"5 coherence-conserving test", coherence},
        {"6 commutation test", commutation},
        {"7 analytic-oracle equivalence", oracle_equivalence},
        {"8 determinism", determinism},
    };
    int failed = 0;
    for (const auto &[name, run] : criteria) {
        Verdict v;
        try {
            v = run();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
        failed += !v.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
