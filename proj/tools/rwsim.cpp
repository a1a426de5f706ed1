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

// Command-line front end: one subcommand per experiment driver plus `validate`.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rwsim/config.hpp"
#include "rwsim/errors.hpp"
#include "rwsim/experiments.hpp"
#include "rwsim/output.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 2, kFitFailure = 3, kIoError = 4 };

struct SharedFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "rwsim_out";
    std::optional<std::string> model;
    std::optional<std::uint64_t> trials;
    int workers = 0;
};

void add_shared(CLI::App *cmd, SharedFlags &flags, bool with_outputs) {
    cmd->add_option("--config", flags.config_path, "Config file")->required();
    cmd->add_option("--seed", flags.seed, "Master seed (overrides the file)");
    cmd->add_option("--model", flags.model, "State model: PaperReduced, ProductPreselected, NonReducedBell");
    cmd->add_option("--trials", flags.trials, "Trials per grid point (overrides the file)");
    if (with_outputs) {
        cmd->add_option("--out", flags.out_dir, "Output directory");
        cmd->add_option("--workers", flags.workers, "OpenMP threads (0 = default)");
    }
}

rwsim::ExperimentConfig load(const SharedFlags &flags) {
    rwsim::ExperimentConfig cfg = rwsim::load_config(flags.config_path);
    if (flags.seed) {
        cfg.master_seed = *flags.seed;
    }
    if (flags.model) {
        cfg.model = rwsim::parse_state_model(*flags.model);
    }
    if (flags.trials) {
        cfg.trials_per_point = *flags.trials;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument &e) {
        throw rwsim::ConfigError("run", 0, e.what());
    }
    return cfg;
}

int finish(const rwsim::OutputBundle &bundle, const rwsim::ExperimentConfig &cfg, const std::string &name,
           const SharedFlags &flags) {
    rwsim::RunManifest manifest = rwsim::make_manifest(cfg, name);
    auto written = rwsim::write_outputs(bundle, manifest, flags.out_dir);
    for (const auto &path : written) {
        std::cout << path.string() << "\n";
    }
    return bundle.fit_failed ? kFitFailure : kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Monte Carlo simulator of the remote which-way-choice experiments"};
    app.require_subcommand(1);

    SharedFlags flags;
    auto *validate = app.add_subcommand("validate", "Parse and validate a config, print its canonical form");
    add_shared(validate, flags, false);
    auto *whichway = app.add_subcommand("whichway", "Fringes with Alice removed vs Alice measuring first");
    add_shared(whichway, flags, true);
    auto *kink = app.add_subcommand("kink", "Visibility versus K = |S-B| - |S-A|");
    add_shared(kink, flags, true);
    auto *qispeed = app.add_subcommand("qispeed", "Collapse speed from two parallel-shifted geometries");
    add_shared(qispeed, flags, true);
    std::optional<double> dist_1;
    std::optional<double> dist_2;
    qispeed->add_option("--dist-1", dist_1, "A-B distance of geometry 1 (default: config value)");
    qispeed->add_option("--dist-2", dist_2, "A-B distance of geometry 2 (default: half of geometry 1)");
    auto *coherence = app.add_subcommand("coherence", "Alice's recombined-beam vs arm-blocking detection");
    add_shared(coherence, flags, true);
    auto *commutation = app.add_subcommand("commutation", "Kinks with ATD, ARD, their sum, and coincidences off");
    add_shared(commutation, flags, true);

    CLI11_PARSE(app, argc, argv);

    try {
        rwsim::ExperimentConfig cfg = load(flags);
        rwsim::RunOptions opts{flags.workers};
        if (validate->parsed()) {
            std::cout << rwsim::to_canonical_text(cfg) << "# config_hash = " << rwsim::config_hash(cfg) << "\n";
            return kOk;
        }
        if (whichway->parsed()) {
            return finish(rwsim::make_bundle(rwsim::exp_remote_which_way(cfg, opts)), cfg, "whichway", flags);
        }
        if (kink->parsed()) {
            return finish(rwsim::make_bundle(rwsim::exp_kink(cfg, opts)), cfg, "kink", flags);
        }
        if (qispeed->parsed()) {
            rwsim::Geometry g1 = cfg.geometry;
            if (dist_1) {
                g1.dist_a_to_b = *dist_1;
            }
            rwsim::Geometry g2 = g1;
            g2.dist_a_to_b = dist_2 ? *dist_2 : 0.5 * g1.dist_a_to_b;
            return finish(rwsim::make_bundle(rwsim::exp_qi_speed(cfg, g1, g2, opts)), cfg, "qispeed", flags);
        }
        if (coherence->parsed()) {
            return finish(rwsim::make_bundle(rwsim::exp_coherence_test(cfg, opts)), cfg, "coherence", flags);
        }
        if (commutation->parsed()) {
            return finish(rwsim::make_bundle(rwsim::exp_commutation(cfg, opts)), cfg, "commutation", flags);
        }
    } catch (const rwsim::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const rwsim::FitFailure &e) {
        std::cerr << "fit failure: " << e.what() << "\n";
        return kFitFailure;
    } catch (const rwsim::UnresolvedKink &e) {
        std::cerr << "fit failure: " << e.what() << "\n";
        return kFitFailure;
    } catch (const rwsim::IoError &e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const rwsim::Error &e) {
        // Invalid geometry, too coarse grids and degenerate geometries are all
        // problems with the requested configuration.
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
