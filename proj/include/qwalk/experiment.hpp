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

#ifndef QWALK_EXPERIMENT_HPP
#define QWALK_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qwalk/analysis.hpp"
#include "qwalk/disorder.hpp"
#include "qwalk/error.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/pulse.hpp"

namespace qwalk::harness {

enum class ExperimentKind {
    Walk,
    DisorderScan,
    Recurrence,
    SigmaFit,
    DoubleSite,
    EightQubit,
    Lyapunov,
    Borland,
    Pulse,
    OracleCheck,
};

std::string_view to_string(ExperimentKind kind);
/// Throws ConfigError for unknown names.
ExperimentKind parse_experiment_kind(std::string_view name);
const std::vector<ExperimentKind> &all_experiment_kinds();

/// Bad configuration. The message starts with the offending field path.
class ConfigError : public InvalidArgument {
   public:
    ConfigError(const std::string &field, const std::string &what)
        : InvalidArgument(field + ": " + what), field_(field) {}
    const std::string &field() const { return field_; }

   private:
    std::string field_;
};

enum class Backend { Engine, QubitCircuit };

struct AnalysisParams {
    // -1 picks the experiment default.
    int fit_t_min = -1;
    int fit_t_max = -1;
    int average_t_min = -1;
    int average_t_max = -1;
    int distance_min = 1;
    int distance_max = 8;
    BinParity parity = BinParity::Even;
};

struct TBParams {
    double energy = 0.0;
    double hopping = 1.0;
    /// W_tb values; borland uses only the first.
    std::vector<double> disorder{1.0};
    long k_max = 100000;
    int n_sites = 2000;
    /// Empty: n_runs seeds derived from master_seed.
    std::vector<std::uint64_t> seeds;
};

struct PulseParams {
    double g_max = pulse::kMaxCoupling;
    double t_ramp = pulse::kDefaultRamp;
    double swap_area = std::numbers::pi / 2;
    double omega_max = pulse::kMaxDetuning;
    double dt = pulse::kDefaultDt;
    /// Sampling interval of the schedule tables.
    double sample_dt = 0.01;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Walk;
    int n_sites = 32;
    Topology topology = Topology::Circle;
    int t_steps = 100;
    std::vector<double> W{0.0};
    int n_runs = 1;
    std::uint64_t master_seed = 1;
    DisorderMode disorder_mode = DisorderMode::Static;
    /// Empty: the experiment's default start.
    std::vector<StateTerm> initial_state;
    Backend backend = Backend::Engine;
    double recurrence_tol = 1e-9;
    int threads = 1;
    bool snapshot_states = false;
    std::string out_dir = "results";
    std::vector<std::string> figures;
    AnalysisParams analysis;
    TBParams tb;
    PulseParams pulse;
};

/// Defaults for one experiment (lattice size, steps, W list, run count).
ExperimentConfig default_config(ExperimentKind kind);

/// Parse a JSON object on top of default_config(experiment). Unknown keys and
/// wrong types raise ConfigError with the field path. Runs validate().
ExperimentConfig parse_config(const nlohmann::json &document);
ExperimentConfig load_config_file(const std::filesystem::path &path);
/// Fully resolved config; parse_config(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const ExperimentConfig &config);

/// Check every module precondition the run will hit. Throws ConfigError.
void validate(const ExperimentConfig &config);

/// Start state used when config.initial_state is empty.
WalkerState initial_state(const ExperimentConfig &config);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ResultBundle {
    ExperimentConfig config;
    /// Keyed by series name; written as <name>.csv.
    std::map<std::string, Table> tables;
    /// Fitted values, config echo, seeds and realization phases.
    nlohmann::json summary;
};

/// Validate, run, and collect every series of the experiment. Worker threads
/// take realizations by index and results are reduced in index order, so the
/// bundle does not depend on config.threads.
ResultBundle run_experiment(const ExperimentConfig &config);

/// Header line plus one line per row, numbers printed with 17 significant digits.
std::string format_csv(const Table &table);

/// Write `contents` to a sibling temp file and rename it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &contents);

/// Tables as <dir>/<name>.csv plus <dir>/summary.json. Returns the paths written.
std::vector<std::filesystem::path> write_bundle(const ResultBundle &bundle, const std::filesystem::path &dir);

const std::vector<std::string> &figure_ids();

/// Plot-ready CSV (and sidecars) for one figure under `dir`. Throws
/// InvalidArgument listing valid ids for an unknown id, or naming the missing
/// series.
std::vector<std::filesystem::path> emit_plotdata(const ResultBundle &bundle, std::string_view figure_id,
                                                 const std::filesystem::path &dir);

nlohmann::json realization_to_json(const DisorderRealization &realization);
DisorderRealization realization_from_json(const nlohmann::json &value, const LatticeSpec &spec);

/// Step duration used for the wall-clock estimate in the summary.
inline constexpr double kStepDurationNs = 30.0;
inline constexpr double kReferenceT1Us = 44.0;

}  // namespace qwalk::harness

#endif  // QWALK_EXPERIMENT_HPP
