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

#include "rwsim/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rwsim/errors.hpp"

namespace rwsim {

namespace {

constexpr std::array kSections = {"source",   "model", "optics_a", "optics_b",    "interferometer",
                                  "geometry", "collapse", "noise", "coincidence", "run"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

double parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
        throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

std::uint64_t parse_uint(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
        throw std::invalid_argument("expected a non-negative integer, got '" + std::string(s) + "'");
    }
    return v;
}

bool parse_bool(std::string_view s) {
    std::string v = lower(trim(s));
    if (v == "true" || v == "on" || v == "yes" || v == "1") {
        return true;
    }
    if (v == "false" || v == "off" || v == "no" || v == "0") {
        return false;
    }
    throw std::invalid_argument("expected a boolean, got '" + std::string(s) + "'");
}

std::vector<std::string_view> split_commas(std::string_view s) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = s.find(',', start);
        parts.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return parts;
}

std::vector<double> parse_grid(std::string_view s) {
    s = trim(s);
    if (s.empty()) {
        return {};
    }
    if (lower(s.substr(0, std::min<std::size_t>(s.size(), 9))) == "linspace(") {
        if (s.back() != ')') {
            throw std::invalid_argument("unterminated linspace(...)");
        }
        auto args = split_commas(s.substr(9, s.size() - 10));
        if (args.size() != 3) {
            throw std::invalid_argument("linspace takes (lo, hi, n)");
        }
        std::uint64_t n = parse_uint(args[2]);
        if (n == 0) {
            throw std::invalid_argument("linspace needs n >= 1");
        }
        return linspace(parse_double(args[0]), parse_double(args[1]), n);
    }
    std::vector<double> out;
    for (auto part : split_commas(s)) {
        out.push_back(parse_double(part));
    }
    return out;
}

MatchingType parse_matching(std::string_view s) {
    std::string v = lower(trim(s));
    if (v == "typei" || v == "type-i" || v == "i") {
        return MatchingType::TypeI;
    }
    if (v == "typeii" || v == "type-ii" || v == "ii") {
        return MatchingType::TypeII;
    }
    throw std::invalid_argument("source type must be TypeI or TypeII, got '" + std::string(s) + "'");
}

CollapseSpec parse_collapse(std::string_view s) {
    std::string v = lower(trim(s));
    if (v == "infinite" || v == "inf") {
        return CollapseSpec::infinite();
    }
    return CollapseSpec::finite(parse_double(s));
}

using Setter = std::function<void(ExperimentConfig &, std::string_view)>;

const std::map<std::string, Setter> &setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["source.type"] = [](ExperimentConfig &c, std::string_view v) { c.source.matching_type = parse_matching(v); };
        t["source.phi_deg"] = [](ExperimentConfig &c, std::string_view v) { c.source.phi_deg = parse_double(v); };
        t["model.kind"] = [](ExperimentConfig &c, std::string_view v) { c.model = parse_state_model(v); };
        for (const char *section : {"optics_a", "optics_b"}) {
            bool a = std::string(section) == "optics_a";
            auto bs = [a](ExperimentConfig &c) -> BeamSplitterSpec & { return a ? c.bs_a : c.bs_b; };
            t[std::string(section) + ".tau"] = [bs](ExperimentConfig &c, std::string_view v) {
                bs(c).tau = parse_double(v);
            };
            t[std::string(section) + ".rho"] = [bs](ExperimentConfig &c, std::string_view v) {
                bs(c).rho = parse_double(v);
            };
            t[std::string(section) + ".phase_t"] = [bs](ExperimentConfig &c, std::string_view v) {
                bs(c).phase_t = parse_double(v);
            };
            t[std::string(section) + ".phase_r"] = [bs](ExperimentConfig &c, std::string_view v) {
                bs(c).phase_r = parse_double(v);
            };
        }
        t["interferometer.k"] = [](ExperimentConfig &c, std::string_view v) { c.interferometer.k = parse_double(v); };
        t["interferometer.delta_r"] = [](ExperimentConfig &c, std::string_view v) {
            c.interferometer.delta_r = parse_double(v);
        };
        t["interferometer.theta_0"] = [](ExperimentConfig &c, std::string_view v) {
            c.interferometer.theta_0 = parse_double(v);
        };
        t["interferometer.zeta"] = [](ExperimentConfig &c, std::string_view v) {
            c.interferometer.zeta = parse_double(v);
        };
        t["interferometer.eta"] = [](ExperimentConfig &c, std::string_view v) {
            c.interferometer.eta = parse_double(v);
        };
        t["geometry.path_s_to_a"] = [](ExperimentConfig &c, std::string_view v) {
            c.geometry.path_s_to_a = parse_double(v);
        };
        t["geometry.path_s_to_b"] = [](ExperimentConfig &c, std::string_view v) {
            c.geometry.path_s_to_b = parse_double(v);
        };
        t["geometry.dist_a_to_b"] = [](ExperimentConfig &c, std::string_view v) {
            c.geometry.dist_a_to_b = parse_double(v);
        };
        t["geometry.c_eff"] = [](ExperimentConfig &c, std::string_view v) { c.geometry.c_eff = parse_double(v); };
        t["collapse.speed"] = [](ExperimentConfig &c, std::string_view v) { c.collapse = parse_collapse(v); };
        t["noise.epsilon"] = [](ExperimentConfig &c, std::string_view v) { c.noise.epsilon = parse_double(v); };
        t["noise.noise_fringe_visibility"] = [](ExperimentConfig &c, std::string_view v) {
            c.noise.noise_fringe_visibility = parse_double(v);
        };
        t["noise.efficiency_atd"] = [](ExperimentConfig &c, std::string_view v) {
            c.noise.efficiency_atd = parse_double(v);
        };
        t["noise.efficiency_ard"] = [](ExperimentConfig &c, std::string_view v) {
            c.noise.efficiency_ard = parse_double(v);
        };
        t["noise.efficiency_fd"] = [](ExperimentConfig &c, std::string_view v) {
            c.noise.efficiency_fd = parse_double(v);
        };
        t["noise.dark_rate"] = [](ExperimentConfig &c, std::string_view v) { c.noise.dark_rate = parse_double(v); };
        t["noise.jitter_sigma"] = [](ExperimentConfig &c, std::string_view v) {
            c.noise.jitter_sigma = parse_double(v);
        };
        t["coincidence.window"] = [](ExperimentConfig &c, std::string_view v) {
            c.coincidence.window = parse_double(v);
        };
        t["coincidence.enabled"] = [](ExperimentConfig &c, std::string_view v) {
            c.coincidence.enabled = parse_bool(v);
        };
        t["run.trials_per_point"] = [](ExperimentConfig &c, std::string_view v) {
            c.trials_per_point = parse_uint(v);
        };
        t["run.master_seed"] = [](ExperimentConfig &c, std::string_view v) { c.master_seed = parse_uint(v); };
        t["run.delta_r_grid"] = [](ExperimentConfig &c, std::string_view v) { c.delta_r_grid = parse_grid(v); };
        t["run.K_grid"] = [](ExperimentConfig &c, std::string_view v) { c.kink_grid = parse_grid(v); };
        return t;
    }();
    return table;
}

constexpr std::array kRequired = {"source.type", "run.delta_r_grid", "run.K_grid"};

std::string format_grid(const std::vector<double> &grid) {
    std::string out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_double(grid[i]);
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

StateModel parse_state_model(std::string_view name) {
    std::string v = lower(trim(name));
    for (StateModel m : {StateModel::PaperReduced, StateModel::ProductPreselected, StateModel::NonReducedBell}) {
        if (v == lower(to_string(m))) {
            return m;
        }
    }
    throw ConfigError("model.kind", 0, "unknown state model '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::map<std::string, int> seen;          // field -> line
    std::map<std::string, int> section_line;  // section -> first line
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("", line_no, "malformed section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
                throw ConfigError(section, line_no, "unknown section");
            }
            section_line.try_emplace(section, line_no);
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", line_no, "expected 'key = value'");
        }
        if (section.empty()) {
            throw ConfigError("", line_no, "key outside of any section");
        }
        std::string field = section + "." + std::string(trim(line.substr(0, eq)));
        auto setter = setters().find(field);
        if (setter == setters().end()) {
            throw ConfigError(field, line_no, "unknown key");
        }
        if (!seen.emplace(field, line_no).second) {
            throw ConfigError(field, line_no, "duplicate key");
        }
        try {
            setter->second(cfg, trim(line.substr(eq + 1)));
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &e) {
            throw ConfigError(field, line_no, e.what());
        }
    }
    for (const char *required : kRequired) {
        if (!seen.count(required)) {
            throw ConfigError(required, 0, "missing required field");
        }
    }

    auto check = [&](const char *name, auto &&fn) {
        try {
            fn();
        } catch (const std::invalid_argument &e) {
            auto it = section_line.find(name);
            throw ConfigError(name, it == section_line.end() ? 0 : it->second, e.what());
        }
    };
    check("source", [&] { cfg.source.validate(); });
    check("optics_a", [&] { cfg.bs_a.validate(); });
    check("optics_b", [&] { cfg.bs_b.validate(); });
    check("interferometer", [&] { cfg.interferometer.validate(); });
    check("geometry", [&] { cfg.geometry.validate(); });
    check("collapse", [&] { cfg.collapse.validate(); });
    check("noise", [&] { cfg.noise.validate(); });
    check("coincidence", [&] { cfg.coincidence.validate(); });
    check("run", [&] { cfg.validate(); });
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_canonical_text(const ExperimentConfig &cfg) {
    std::ostringstream out;
    auto kv = [&out](const char *key, const std::string &value) { out << key << " = " << value << "\n"; };
    auto splitter = [&](const char *name, const BeamSplitterSpec &bs) {
        out << "[" << name << "]\n";
        kv("tau", format_double(bs.tau));
        kv("rho", format_double(bs.rho));
        kv("phase_t", format_double(bs.phase_t));
        kv("phase_r", format_double(bs.phase_r));
    };
    out << "[source]\n";
    kv("type", to_string(cfg.source.matching_type));
    kv("phi_deg", format_double(cfg.source.phi_deg));
    out << "[model]\n";
    kv("kind", to_string(cfg.model));
    splitter("optics_a", cfg.bs_a);
    splitter("optics_b", cfg.bs_b);
    out << "[interferometer]\n";
    kv("k", format_double(cfg.interferometer.k));
    kv("delta_r", format_double(cfg.interferometer.delta_r));
    kv("theta_0", format_double(cfg.interferometer.theta_0));
    kv("zeta", format_double(cfg.interferometer.zeta));
    kv("eta", format_double(cfg.interferometer.eta));
    out << "[geometry]\n";
    kv("path_s_to_a", format_double(cfg.geometry.path_s_to_a));
    kv("path_s_to_b", format_double(cfg.geometry.path_s_to_b));
    kv("dist_a_to_b", format_double(cfg.geometry.dist_a_to_b));
    kv("c_eff", format_double(cfg.geometry.c_eff));
    out << "[collapse]\n";
    kv("speed", cfg.collapse.is_infinite() ? std::string("infinite") : format_double(*cfg.collapse.speed));
    out << "[noise]\n";
    kv("epsilon", format_double(cfg.noise.epsilon));
    kv("noise_fringe_visibility", format_double(cfg.noise.noise_fringe_visibility));
    kv("efficiency_atd", format_double(cfg.noise.efficiency_atd));
    kv("efficiency_ard", format_double(cfg.noise.efficiency_ard));
    kv("efficiency_fd", format_double(cfg.noise.efficiency_fd));
    kv("dark_rate", format_double(cfg.noise.dark_rate));
    kv("jitter_sigma", format_double(cfg.noise.jitter_sigma));
    out << "[coincidence]\n";
    kv("window", format_double(cfg.coincidence.window));
    kv("enabled", cfg.coincidence.enabled ? "true" : "false");
    out << "[run]\n";
    kv("trials_per_point", std::to_string(cfg.trials_per_point));
    kv("master_seed", std::to_string(cfg.master_seed));
    kv("delta_r_grid", format_grid(cfg.delta_r_grid));
    kv("K_grid", format_grid(cfg.kink_grid));
    return out.str();
}

std::string config_hash(const ExperimentConfig &cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_canonical_text(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace rwsim
