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

#include "rwsim/output.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "rwsim/config.hpp"
#include "rwsim/errors.hpp"

namespace rwsim {

using nlohmann::json;

namespace {

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

json kink_json(const KinkResult &r) {
    json j;
    j["channel"] = to_string(r.channel);
    j["predicted_center"] = r.predicted_center;
    j["predicted_width"] = r.predicted_width;
    j["curve"] = to_json(r.scan.curve);
    if (r.fit) {
        j["fit"] = to_json(*r.fit);
    } else {
        j["fit_failure"] = r.failure;
        j["flat_level"] = r.flat_level;
    }
    return j;
}

json amplitude_json(const CurveAmplitude &a) {
    json j = to_json(a.amplitude);
    j["source"] = a.fit ? "kink_fit" : "plateau_contrast";
    if (a.fit) {
        j["fit"] = to_json(*a.fit);
    }
    return j;
}

json optional_json(const std::optional<double> &v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

const char *to_string(Channel channel) {
    switch (channel) {
        case Channel::Total:
            return "total";
        case Channel::CoincAtd:
            return "coinc_atd";
        case Channel::CoincArd:
            return "coinc_ard";
        case Channel::CoincSum:
            return "coinc_sum";
    }
    return "?";
}

RunManifest make_manifest(const ExperimentConfig &cfg, std::string experiment_name) {
    RunManifest m;
    m.config_hash = config_hash(cfg);
    m.master_seed = cfg.master_seed;
    m.experiment_name = std::move(experiment_name);
    return m;
}

std::string scan_csv(const FringeScan &scan) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto &p : scan.points) {
        out += format_double(p.path_difference);
        out += ',';
        out += format_double(p.delta_r);
        for (std::uint64_t v : {p.counts.n_trials, p.counts.counts_total, p.counts.counts_coinc_atd,
                                p.counts.counts_coinc_ard}) {
            out += ',';
            out += std::to_string(v);
        }
        out += '\n';
    }
    return out;
}

FringeScan flatten(const KinkScan &kink) {
    FringeScan out;
    for (const auto &scan : kink.scans) {
        out.points.insert(out.points.end(), scan.points.begin(), scan.points.end());
    }
    return out;
}

json to_json(const VisibilityEstimate &v) {
    return {{"V", v.visibility},
            {"std_err", v.std_err},
            {"fit_amplitude", v.fit_amplitude},
            {"fit_offset", v.fit_offset},
            {"fit_phase", v.fit_phase}};
}

json to_json(const Estimate &e) {
    return {{"value", e.value}, {"std_err", e.std_err}};
}

json to_json(const KinkFit &fit) {
    return {{"V_max", to_json(fit.v_max)},   {"V_min", to_json(fit.v_min)},
            {"center_K", to_json(fit.center)}, {"width_w", to_json(fit.width)},
            {"amplitude", to_json(fit.amplitude)}, {"chi2_per_dof", fit.chi2_per_dof}};
}

json to_json(const KinkCurve &curve) {
    json rows = json::array();
    for (const auto &p : curve) {
        rows.push_back({{"K", p.path_difference}, {"V", p.visibility.visibility}, {"std_err", p.visibility.std_err}});
    }
    return rows;
}

json summarize_scan_fit(const FringeScan &scan, Channel channel, double k) {
    try {
        json j = to_json(fit_visibility(scan, channel, k));
        j["channel"] = to_string(channel);
        return j;
    } catch (const Error &e) {
        return {{"channel", to_string(channel)}, {"fit_failure", e.what()}};
    }
}

OutputBundle make_bundle(const WhichWayResult &r) {
    OutputBundle b;
    b.scans = {{"alice_removed.csv", r.alice_removed}, {"alice_first.csv", r.alice_first}};
    b.results["V_alice_removed"] = to_json(r.v_alice_removed);
    b.results["V_alice_first"] = to_json(r.v_alice_first);
    b.results["alice_first_K"] = r.alice_first.points.empty() ? 0.0 : r.alice_first.points.front().path_difference;
    return b;
}

OutputBundle make_bundle(const KinkResult &r) {
    OutputBundle b;
    b.scans = {{"kink.csv", flatten(r.scan)}};
    b.results = kink_json(r);
    b.fit_failed = !r.fit.has_value();
    return b;
}

OutputBundle make_bundle(const QiSpeedResult &r) {
    OutputBundle b;
    b.scans = {{"kink_geometry_1.csv", flatten(r.kink_1.scan)}, {"kink_geometry_2.csv", flatten(r.kink_2.scan)}};
    b.results["kink_geometry_1"] = kink_json(r.kink_1);
    b.results["kink_geometry_2"] = kink_json(r.kink_2);
    b.results["v_qi_single"] = optional_json(r.v_qi_single);
    b.results["v_qi_diff"] = optional_json(r.v_qi_diff);
    b.results["v_qi_min_bound"] = r.v_qi_min_bound;
    b.results["delta_K"] = r.delta_k;
    b.results["speed_unit"] = "c_eff";
    return b;
}

OutputBundle make_bundle(const CoherenceResult &r) {
    OutputBundle b;
    b.scans = {{"coherence_out.csv", r.case_out.scan}, {"coherence_in_arm.csv", r.case_in_arm.scan}};
    b.results["V_case0"] = to_json(r.case_out.visibility);
    b.results["V_caseI"] = to_json(r.case_in_arm.visibility);
    return b;
}

OutputBundle make_bundle(const CommutationResult &r) {
    OutputBundle b;
    b.scans = {{"commutation_t.csv", flatten(r.v_t)},
               {"commutation_r.csv", flatten(r.v_r)},
               {"commutation_t_plus_r.csv", flatten(r.v_t_plus_r)},
               {"commutation_coinc_off.csv", flatten(r.coinc_off)}};
    b.results["curves"] = {{"V_T", to_json(r.v_t.curve)},
                           {"V_R", to_json(r.v_r.curve)},
                           {"V_TplusR_coincOn", to_json(r.v_t_plus_r.curve)},
                           {"V_TplusR_coincOff", to_json(r.coinc_off.curve)}};
    b.results["kink_amplitudes"] = {{"V_T", amplitude_json(r.amp_t)},
                                    {"V_R", amplitude_json(r.amp_r)},
                                    {"V_TplusR_coincOn", amplitude_json(r.amp_on)},
                                    {"V_TplusR_coincOff", amplitude_json(r.amp_off)}};
    b.results["eq14_consistent"] = r.eq14_consistent;
    b.results["eq15_consistent"] = r.eq15_consistent;
    b.results["ineq16_holds"] = r.ineq16_holds;
    b.results["statistics"] = {{"eq14_max_z", r.eq14_max_z},
                               {"eq15_max_z", r.eq15_max_z},
                               {"ineq16_z_on_minus_off", r.ineq16_z_on_minus_off},
                               {"ineq16_z_off", r.ineq16_z_off}};
    return b;
}

std::string summary_text(const OutputBundle &bundle, const RunManifest &manifest) {
    json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["experiment"] = manifest.experiment_name;
    j["artifact_version"] = manifest.artifact_version;
    j["config_hash"] = manifest.config_hash;
    j["master_seed"] = manifest.master_seed;
    json files = json::array();
    for (const auto &s : bundle.scans) {
        files.push_back(s.file_name);
    }
    j["outputs"] = files;
    j["fit_failure"] = bundle.fit_failed;
    j["results"] = bundle.results;
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_outputs(const OutputBundle &bundle, RunManifest &manifest,
                                                 const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    for (const auto &s : bundle.scans) {
        auto path = dir / s.file_name;
        write_file(path, scan_csv(s.scan));
        written.push_back(path);
    }
    auto summary = dir / "summary.json";
    written.push_back(summary);
    manifest.output_paths.clear();
    for (const auto &p : written) {
        manifest.output_paths.push_back(p.string());
    }
    write_file(summary, summary_text(bundle, manifest));
    return written;
}

}  // namespace rwsim
