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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwsim/experiments.hpp"

namespace rwsim {

inline constexpr int kSummarySchemaVersion = 1;
inline constexpr std::string_view kArtifactVersion = "0.1.0";
inline constexpr std::string_view kCsvHeader = "K,delta_r,n_trials,counts_total,counts_coinc_atd,counts_coinc_ard";

struct RunManifest {
    std::string config_hash;
    std::uint64_t master_seed = 0;
    std::string artifact_version{kArtifactVersion};
    std::string experiment_name;
    std::vector<std::string> output_paths;
};

RunManifest make_manifest(const ExperimentConfig &cfg, std::string experiment_name);

/// Header plus one row per point. Byte-stable: integers in decimal, doubles
/// in shortest round-trip form.
std::string scan_csv(const FringeScan &scan);

/// All K points of a kink run in one scan, K-major.
FringeScan flatten(const KinkScan &kink);

struct NamedScan {
    std::string file_name;
    FringeScan scan;
};

/// Files and summary payload of one driver run.
struct OutputBundle {
    std::vector<NamedScan> scans;
    nlohmann::json results = nlohmann::json::object();
    bool fit_failed = false;
};

nlohmann::json to_json(const VisibilityEstimate &v);
nlohmann::json to_json(const Estimate &e);
nlohmann::json to_json(const KinkFit &fit);
nlohmann::json to_json(const KinkCurve &curve);

/// Fit of one channel, or {"fit_failure": message} if the fit throws.
nlohmann::json summarize_scan_fit(const FringeScan &scan, Channel channel, double k);

OutputBundle make_bundle(const WhichWayResult &r);
OutputBundle make_bundle(const KinkResult &r);
OutputBundle make_bundle(const QiSpeedResult &r);
OutputBundle make_bundle(const CoherenceResult &r);
OutputBundle make_bundle(const CommutationResult &r);

/// Writes the CSVs and `summary.json` into `dir` (created if needed) and
/// records the written paths in the manifest. Throws IoError.
std::vector<std::filesystem::path> write_outputs(const OutputBundle &bundle, RunManifest &manifest,
                                                 const std::filesystem::path &dir);

/// Summary document exactly as written to summary.json.
std::string summary_text(const OutputBundle &bundle, const RunManifest &manifest);

const char *to_string(Channel channel);

}  // namespace rwsim
