// Copyright 2026 The qwalk Authors
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

// Command-line runner: one subcommand per experiment.
//
//   qwalk_cli disorder_scan --config configs/fig6.json --threads 4 --out-dir out/fig6
//
// Exit codes: 0 success, 1 other failure, 2 configuration error, 3 numerical
// invariant violation.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwalk/error.hpp"
#include "qwalk/experiment.hpp"

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    bool snapshot_states = false;
    std::vector<std::string> figures;
};

nlohmann::json load_document(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw qwalk::harness::ConfigError("--config", "cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error &e) {
        throw qwalk::harness::ConfigError("--config", path + ": " + e.what());
    }
}

int run(const std::string &experiment, const Options &opt) {
    using namespace qwalk::harness;
    nlohmann::json doc = opt.config_path.empty() ? nlohmann::json::object() : load_document(opt.config_path);
    if (!doc.is_object()) {
        throw ConfigError("<root>", "expected an object");
    }
    if (doc.contains("experiment") && doc["experiment"] != experiment) {
        throw ConfigError("experiment", "config says '" + doc["experiment"].dump() + "' but the subcommand is '" +
                                            experiment + "'");
    }
    doc["experiment"] = experiment;
    if (opt.seed) {
        doc["master_seed"] = *opt.seed;
    }
    if (opt.threads) {
        doc["threads"] = *opt.threads;
    }
    if (opt.out_dir || opt.snapshot_states || !opt.figures.empty()) {
        nlohmann::json &out = doc["output"];
        if (out.is_null()) {
            out = nlohmann::json::object();
        }
        if (opt.out_dir) {
            out["dir"] = *opt.out_dir;
        }
        if (opt.snapshot_states) {
            out["snapshot_states"] = true;
        }
        for (const auto &f : opt.figures) {
            out["figures"].push_back(f);
        }
    }
    const ExperimentConfig config = parse_config(doc);
    for (const auto &f : config.figures) {
        const auto &ids = figure_ids();
        if (std::find(ids.begin(), ids.end(), f) == ids.end()) {
            std::string valid;
            for (const auto &id : ids) {
                valid += (valid.empty() ? "" : ", ") + id;
            }
            throw ConfigError("output.figures", "unknown figure id '" + f + "'; valid ids: " + valid);
        }
    }

    const ResultBundle bundle = run_experiment(config);
    std::vector<std::filesystem::path> written = write_bundle(bundle, config.out_dir);
    for (const auto &f : config.figures) {
        for (auto &p : emit_plotdata(bundle, f, std::filesystem::path(config.out_dir) / "plotdata")) {
            written.push_back(std::move(p));
        }
    }
    for (const auto &p : written) {
        std::cout << p.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Discrete-time quantum walk experiments on paired-qubit lattices"};
    app.require_subcommand(1);
    Options opt;
    std::string chosen;
    for (auto kind : qwalk::harness::all_experiment_kinds()) {
        const std::string name(qwalk::harness::to_string(kind));
        CLI::App *sub = app.add_subcommand(name, "Run the " + name + " experiment");
        sub->add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", opt.seed, "Master seed (overrides the config)");
        sub->add_option("--out-dir", opt.out_dir, "Output directory (overrides the config)");
        sub->add_option("--threads", opt.threads, "Worker threads over realizations");
        sub->add_flag("--snapshot-states", opt.snapshot_states, "Also write the full state of realization 0");
        sub->add_option("--figure", opt.figures, "Emit plot data for a figure id (repeatable)");
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        return run(chosen, opt);
    } catch (const qwalk::InvalidArgument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qwalk::InvariantViolation &e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
