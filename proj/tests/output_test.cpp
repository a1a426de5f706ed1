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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "rwsim/config.hpp"
#include "rwsim/errors.hpp"
#include "test_configs.hpp"

using namespace rwsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class OutputDir : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("rwsim_output_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }
    fs::path dir_;
};

ExperimentConfig small_config() {
    auto cfg = rwsim::testing::ideal_config(1000);
    cfg.kink_grid = linspace(-1.0, 1.0, 9);
    return cfg;
}

}  // namespace

TEST(ScanCsv, header_and_rows) {
    FringeScan scan;
    BatchCounts c;
    c.n_trials = 10;
    c.counts_total = 4;
    c.counts_coinc_atd = 1;
    c.counts_coinc_ard = 2;
    scan.points.push_back({0.5, 1e-7, c});
    EXPECT_EQ(scan_csv(scan), "K,delta_r,n_trials,counts_total,counts_coinc_atd,counts_coinc_ard\n0.5,1e-07,10,4,1,2\n");
    EXPECT_EQ(scan_csv(FringeScan{}), std::string(kCsvHeader) + "\n");
}

TEST_F(OutputDir, rerun_is_byte_identical) {
    auto cfg = small_config();
    std::string first_csv, first_summary;
    for (int run = 0; run < 2; ++run) {
        auto bundle = make_bundle(exp_remote_which_way(cfg));
        auto manifest = make_manifest(cfg, "whichway");
        auto paths = write_outputs(bundle, manifest, dir_);
        ASSERT_EQ(paths.size(), 3u);
        if (run == 0) {
            first_csv = slurp(dir_ / "alice_removed.csv");
            first_summary = slurp(dir_ / "summary.json");
        } else {
            EXPECT_EQ(slurp(dir_ / "alice_removed.csv"), first_csv);
            EXPECT_EQ(slurp(dir_ / "summary.json"), first_summary);
        }
    }
    EXPECT_EQ(std::count(first_csv.begin(), first_csv.end(), '\n'), 17);
}

TEST_F(OutputDir, empty_scan_flags_fit_failure) {
    KinkResult r;
    r.failure = "no data";
    auto bundle = make_bundle(r);
    auto manifest = make_manifest(small_config(), "kink");
    write_outputs(bundle, manifest, dir_);
    EXPECT_EQ(slurp(dir_ / "kink.csv"), std::string(kCsvHeader) + "\n");
    auto summary = nlohmann::json::parse(slurp(dir_ / "summary.json"));
    EXPECT_EQ(summary["fit_failure"], true);
    EXPECT_EQ(summary["results"]["fit_failure"], "no data");
}

TEST_F(OutputDir, commutation_writes_four_scans_and_verdicts) {
    auto cfg = small_config();
    cfg.noise.epsilon = 0.05;
    auto bundle = make_bundle(exp_commutation(cfg));
    auto manifest = make_manifest(cfg, "commutation");
    auto paths = write_outputs(bundle, manifest, dir_);
    EXPECT_EQ(paths.size(), 5u);
    for (const char *name :
         {"commutation_t.csv", "commutation_r.csv", "commutation_t_plus_r.csv", "commutation_coinc_off.csv"}) {
        EXPECT_TRUE(fs::exists(dir_ / name)) << name;
    }
    auto summary = nlohmann::json::parse(slurp(dir_ / "summary.json"));
    EXPECT_EQ(summary["schema_version"], kSummarySchemaVersion);
    EXPECT_EQ(summary["experiment"], "commutation");
    EXPECT_EQ(summary["config_hash"], config_hash(cfg));
    EXPECT_EQ(summary["master_seed"], cfg.master_seed);
    for (const char *key : {"eq14_consistent", "eq15_consistent", "ineq16_holds"}) {
        EXPECT_TRUE(summary["results"][key].is_boolean()) << key;
    }
}

TEST_F(OutputDir, unwritable_path_is_io_error) {
    fs::create_directories(dir_);
    std::ofstream(dir_ / "blocker") << "x";
    auto manifest = make_manifest(small_config(), "kink");
    EXPECT_THROW(write_outputs(make_bundle(KinkResult{}), manifest, dir_ / "blocker" / "sub"), IoError);
}

TEST(SummarizeScanFit, reports_failures_instead_of_throwing) {
    auto j = summarize_scan_fit(FringeScan{}, Channel::Total, 1.0);
    EXPECT_TRUE(j.contains("fit_failure"));
}
