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

#include "qwalk/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "qwalk/anderson.hpp"
#include "qwalk/qubit_oracle.hpp"
#include "qwalk/walk.hpp"

namespace qwalk::harness {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config reading

std::string join_path(const std::string &parent, const std::string &key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string index_path(const std::string &parent, std::size_t i) {
    return parent + "[" + std::to_string(i) + "]";
}

// Reads the keys of one JSON object and rejects the ones nobody asked for.
class ObjectReader {
   public:
    ObjectReader(const json &object, std::string path) : object_(object), path_(std::move(path)) {
        if (!object_.is_object()) {
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    const json *find(const std::string &key) {
        used_.insert(key);
        auto it = object_.find(key);
        return it == object_.end() ? nullptr : &*it;
    }

    std::string path(const std::string &key) const { return join_path(path_, key); }

    void finish() const {
        for (auto it = object_.begin(); it != object_.end(); ++it) {
            if (used_.count(it.key()) == 0) {
                throw ConfigError(path(it.key()), "unknown key");
            }
        }
    }

   private:
    const json &object_;
    std::string path_;
    std::set<std::string> used_;
};

double as_double(const json &v, const std::string &path) {
    if (!v.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(path, "must be finite");
    }
    return x;
}

long long as_integer(const json &v, const std::string &path, long long lo, long long hi) {
    if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(hi)) {
            throw ConfigError(path, "out of range");
        }
        return static_cast<long long>(u);
    }
    if (!v.is_number_integer()) {
        throw ConfigError(path, "expected an integer");
    }
    const auto x = v.get<long long>();
    if (x < lo || x > hi) {
        throw ConfigError(path, "out of range");
    }
    return x;
}

int as_int(const json &v, const std::string &path) {
    return static_cast<int>(as_integer(v, path, std::numeric_limits<int>::min(), std::numeric_limits<int>::max()));
}

std::uint64_t as_seed(const json &v, const std::string &path) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer() && v.get<long long>() >= 0) {
        return static_cast<std::uint64_t>(v.get<long long>());
    }
    throw ConfigError(path, "expected a non-negative integer");
}

bool as_bool(const json &v, const std::string &path) {
    if (!v.is_boolean()) {
        throw ConfigError(path, "expected true or false");
    }
    return v.get<bool>();
}

std::string as_string(const json &v, const std::string &path) {
    if (!v.is_string()) {
        throw ConfigError(path, "expected a string");
    }
    return v.get<std::string>();
}

// A scalar or a list of numbers.
std::vector<double> as_double_list(const json &v, const std::string &path) {
    if (v.is_number()) {
        return {as_double(v, path)};
    }
    if (!v.is_array() || v.empty()) {
        throw ConfigError(path, "expected a number or a non-empty list of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_double(v[i], index_path(path, i)));
    }
    return out;
}

template <typename Enum, std::size_t K>
Enum as_enum(const json &v, const std::string &path, const std::pair<const char *, Enum> (&names)[K]) {
    const std::string s = as_string(v, path);
    std::string valid;
    for (const auto &[name, value] : names) {
        if (s == name) {
            return value;
        }
        valid += valid.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(path, "'" + s + "' is not one of " + valid);
}

constexpr std::pair<const char *, Topology> kTopologyNames[] = {{"circle", Topology::Circle},
                                                                {"line", Topology::Line}};
constexpr std::pair<const char *, DisorderMode> kModeNames[] = {{"static", DisorderMode::Static},
                                                                {"dynamic", DisorderMode::Dynamic}};
constexpr std::pair<const char *, Backend> kBackendNames[] = {{"engine", Backend::Engine},
                                                              {"qubit_circuit", Backend::QubitCircuit}};
constexpr std::pair<const char *, BinParity> kParityNames[] = {
    {"all", BinParity::All}, {"even", BinParity::Even}, {"odd", BinParity::Odd}};
constexpr std::pair<const char *, Spin> kSpinNames[] = {{"down", Spin::Down}, {"up", Spin::Up}};

template <typename Enum, std::size_t K>
const char *enum_name(Enum value, const std::pair<const char *, Enum> (&names)[K]) {
    for (const auto &[name, v] : names) {
        if (v == value) {
            return name;
        }
    }
    return "?";
}

template <typename T, typename Fn>
void read_if(ObjectReader &r, const std::string &key, T &out, Fn convert) {
    if (const json *v = r.find(key)) {
        out = convert(*v, r.path(key));
    }
}

std::vector<StateTerm> parse_initial_state(const json &v, const std::string &path) {
    if (!v.is_array()) {
        throw ConfigError(path, "expected a list of {site, spin, amplitude} terms");
    }
    std::vector<StateTerm> terms;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = index_path(path, i);
        ObjectReader r(v[i], p);
        StateTerm term{0, Spin::Down, Complex(1.0, 0.0)};
        const json *site = r.find("site");
        if (site == nullptr) {
            throw ConfigError(r.path("site"), "missing");
        }
        term.site = as_int(*site, r.path("site"));
        read_if(r, "spin", term.spin, [](const json &x, const std::string &q) { return as_enum(x, q, kSpinNames); });
        if (const json *a = r.find("amplitude")) {
            const std::string q = r.path("amplitude");
            if (a->is_number()) {
                term.amplitude = Complex(as_double(*a, q), 0.0);
            } else if (a->is_array() && a->size() == 2) {
                term.amplitude = Complex(as_double((*a)[0], index_path(q, 0)), as_double((*a)[1], index_path(q, 1)));
            } else {
                throw ConfigError(q, "expected a number or [re, im]");
            }
        }
        r.finish();
        terms.push_back(term);
    }
    return terms;
}

// ---------------------------------------------------------------------------
// Small helpers

template <typename Fn>
void parallel_for(int n, int threads, Fn &&fn) {
    const int workers = std::max(1, std::min(threads, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for (auto &t : pool) {
        t.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string w_label(const char *prefix, double w) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%sW=%g", prefix, w);
    return buf;
}

json fit_to_json(const FitResult &fit) {
    return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
            {"n_points", fit.n_points}};
}

double time_average(const std::vector<double> &series, int t_min, int t_max) {
    double acc = 0.0;
    for (int t = t_min; t <= t_max; ++t) {
        acc += series[static_cast<std::size_t>(t)];
    }
    return acc / static_cast<double>(t_max - t_min + 1);
}

// Smallest p with s[t + p] == s[t] (to tol) over the whole series; needs two full periods.
std::optional<int> series_period(const std::vector<double> &s, double tol) {
    const int n = static_cast<int>(s.size());
    for (int p = 1; 2 * p <= n - 1; ++p) {
        bool ok = true;
        for (int t = 0; t + p < n && ok; ++t) {
            ok = std::abs(s[static_cast<std::size_t>(t + p)] - s[static_cast<std::size_t>(t)]) < tol;
        }
        if (ok) {
            return p;
        }
    }
    return std::nullopt;
}

json timing_metadata(int t_steps) {
    const double us = kStepDurationNs * t_steps / 1000.0;
    return {{"step_duration_ns", kStepDurationNs},
            {"steps", t_steps},
            {"walk_duration_us", us},
            {"reference_t1_us", kReferenceT1Us},
            {"fraction_of_t1", us / kReferenceT1Us}};
}

ExperimentConfig resolve(ExperimentConfig c) {
    AnalysisParams &a = c.analysis;
    if (a.fit_t_min < 0) {
        a.fit_t_min = 1;
    }
    if (a.fit_t_max < 0) {
        // Last step before the two fronts meet at the antipode.
        a.fit_t_max = std::max(a.fit_t_min + 1, std::min(c.t_steps, c.n_sites / 2 - 1));
    }
    if (a.average_t_min < 0) {
        const int preferred = c.experiment == ExperimentKind::EightQubit ? 10 : 50;
        a.average_t_min = c.t_steps >= preferred ? preferred : c.t_steps / 2;
    }
    if (a.average_t_max < 0) {
        a.average_t_max = c.t_steps;
    }
    return c;
}

bool needs_clean_walk(ExperimentKind k) { return k == ExperimentKind::Recurrence || k == ExperimentKind::SigmaFit; }

bool is_walk_experiment(ExperimentKind k) {
    return k != ExperimentKind::Lyapunov && k != ExperimentKind::Borland && k != ExperimentKind::Pulse;
}

}  // namespace

// ---------------------------------------------------------------------------
// Experiment names and defaults

namespace {
constexpr std::pair<const char *, ExperimentKind> kExperimentNames[] = {
    {"walk", ExperimentKind::Walk},
    {"disorder_scan", ExperimentKind::DisorderScan},
    {"recurrence", ExperimentKind::Recurrence},
    {"sigma_fit", ExperimentKind::SigmaFit},
    {"double_site", ExperimentKind::DoubleSite},
    {"eight_qubit", ExperimentKind::EightQubit},
    {"lyapunov", ExperimentKind::Lyapunov},
    {"borland", ExperimentKind::Borland},
    {"pulse", ExperimentKind::Pulse},
    {"oracle_check", ExperimentKind::OracleCheck},
};
}  // namespace

std::string_view to_string(ExperimentKind kind) { return enum_name(kind, kExperimentNames); }

ExperimentKind parse_experiment_kind(std::string_view name) {
    return as_enum(json(std::string(name)), "experiment", kExperimentNames);
}

const std::vector<ExperimentKind> &all_experiment_kinds() {
    static const std::vector<ExperimentKind> kinds = [] {
        std::vector<ExperimentKind> out;
        for (const auto &[name, kind] : kExperimentNames) {
            out.push_back(kind);
        }
        return out;
    }();
    return kinds;
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::Walk:
        case ExperimentKind::SigmaFit:
            break;
        case ExperimentKind::Recurrence:
            c.n_sites = 4;
            c.t_steps = 50;
            break;
        case ExperimentKind::DisorderScan:
            c.W = {0.0, 0.25, 0.5, 1.0};
            c.n_runs = 50;
            break;
        case ExperimentKind::DoubleSite:
            c.W = {1.0};
            c.n_runs = 50;
            break;
        case ExperimentKind::EightQubit:
            c.n_sites = 4;
            c.t_steps = 50;
            c.W = {0.0, 1.0};
            c.n_runs = 300;
            c.backend = Backend::QubitCircuit;
            break;
        case ExperimentKind::OracleCheck:
            c.n_sites = 4;
            c.t_steps = 25;
            c.W = {1.0};
            c.n_runs = 25;
            break;
        case ExperimentKind::Lyapunov:
            c.tb.disorder = {0.0, 0.5, 1.0, 2.0, 4.0};
            c.n_runs = 10;
            break;
        case ExperimentKind::Borland:
            c.tb.disorder = {2.0};
            c.n_runs = 10;
            break;
        case ExperimentKind::Pulse:
            break;
    }
    return c;
}

ExperimentConfig parse_config(const json &document) {
    ObjectReader root(document, "");
    const json *kind_value = root.find("experiment");
    if (kind_value == nullptr) {
        throw ConfigError("experiment", "missing");
    }
    ExperimentConfig c = default_config(as_enum(*kind_value, "experiment", kExperimentNames));

    read_if(root, "n_sites", c.n_sites, as_int);
    read_if(root, "topology", c.topology,
            [](const json &v, const std::string &p) { return as_enum(v, p, kTopologyNames); });
    read_if(root, "t_steps", c.t_steps, as_int);
    read_if(root, "W", c.W, as_double_list);
    read_if(root, "n_runs", c.n_runs, as_int);
    read_if(root, "master_seed", c.master_seed, as_seed);
    read_if(root, "disorder_mode", c.disorder_mode,
            [](const json &v, const std::string &p) { return as_enum(v, p, kModeNames); });
    read_if(root, "initial_state", c.initial_state, parse_initial_state);
    read_if(root, "backend", c.backend,
            [](const json &v, const std::string &p) { return as_enum(v, p, kBackendNames); });
    read_if(root, "recurrence_tol", c.recurrence_tol, as_double);
    read_if(root, "threads", c.threads, as_int);

    if (const json *out = root.find("output")) {
        ObjectReader r(*out, "output");
        read_if(r, "dir", c.out_dir, as_string);
        read_if(r, "snapshot_states", c.snapshot_states, as_bool);
        if (const json *figs = r.find("figures")) {
            if (!figs->is_array()) {
                throw ConfigError(r.path("figures"), "expected a list of figure ids");
            }
            c.figures.clear();
            for (std::size_t i = 0; i < figs->size(); ++i) {
                c.figures.push_back(as_string((*figs)[i], index_path(r.path("figures"), i)));
            }
        }
        r.finish();
    }
    if (const json *an = root.find("analysis")) {
        ObjectReader r(*an, "analysis");
        read_if(r, "fit_t_min", c.analysis.fit_t_min, as_int);
        read_if(r, "fit_t_max", c.analysis.fit_t_max, as_int);
        read_if(r, "average_t_min", c.analysis.average_t_min, as_int);
        read_if(r, "average_t_max", c.analysis.average_t_max, as_int);
        read_if(r, "distance_min", c.analysis.distance_min, as_int);
        read_if(r, "distance_max", c.analysis.distance_max, as_int);
        read_if(r, "parity", c.analysis.parity,
                [](const json &v, const std::string &p) { return as_enum(v, p, kParityNames); });
        r.finish();
    }
    if (const json *tb = root.find("tb")) {
        ObjectReader r(*tb, "tb");
        read_if(r, "energy", c.tb.energy, as_double);
        read_if(r, "hopping", c.tb.hopping, as_double);
        read_if(r, "disorder", c.tb.disorder, as_double_list);
        read_if(r, "k_max", c.tb.k_max, [](const json &v, const std::string &p) {
            return static_cast<long>(as_integer(v, p, std::numeric_limits<long>::min(), std::numeric_limits<long>::max()));
        });
        read_if(r, "n_sites", c.tb.n_sites, as_int);
        if (const json *seeds = r.find("seeds")) {
            if (!seeds->is_array()) {
                throw ConfigError(r.path("seeds"), "expected a list of seeds");
            }
            c.tb.seeds.clear();
            for (std::size_t i = 0; i < seeds->size(); ++i) {
                c.tb.seeds.push_back(as_seed((*seeds)[i], index_path(r.path("seeds"), i)));
            }
        }
        r.finish();
    }
    if (const json *pu = root.find("pulse")) {
        ObjectReader r(*pu, "pulse");
        read_if(r, "g_max", c.pulse.g_max, as_double);
        read_if(r, "t_ramp", c.pulse.t_ramp, as_double);
        read_if(r, "swap_area", c.pulse.swap_area, as_double);
        read_if(r, "omega_max", c.pulse.omega_max, as_double);
        read_if(r, "dt", c.pulse.dt, as_double);
        read_if(r, "sample_dt", c.pulse.sample_dt, as_double);
        r.finish();
    }
    root.finish();
    c = resolve(c);
    validate(c);
    return c;
}

ExperimentConfig load_config_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("--config", "cannot open " + path.string());
    }
    json document;
    try {
        document = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error &e) {
        throw ConfigError("--config", path.string() + ": " + e.what());
    }
    return parse_config(document);
}

json config_to_json(const ExperimentConfig &c) {
    json terms = json::array();
    for (const StateTerm &t : c.initial_state) {
        terms.push_back({{"site", t.site},
                         {"spin", enum_name(t.spin, kSpinNames)},
                         {"amplitude", {t.amplitude.real(), t.amplitude.imag()}}});
    }
    return {
        {"experiment", std::string(to_string(c.experiment))},
        {"n_sites", c.n_sites},
        {"topology", enum_name(c.topology, kTopologyNames)},
        {"t_steps", c.t_steps},
        {"W", c.W},
        {"n_runs", c.n_runs},
        {"master_seed", c.master_seed},
        {"disorder_mode", enum_name(c.disorder_mode, kModeNames)},
        {"initial_state", terms},
        {"backend", enum_name(c.backend, kBackendNames)},
        {"recurrence_tol", c.recurrence_tol},
        {"threads", c.threads},
        {"output", {{"dir", c.out_dir}, {"snapshot_states", c.snapshot_states}, {"figures", c.figures}}},
        {"analysis",
         {{"fit_t_min", c.analysis.fit_t_min},
          {"fit_t_max", c.analysis.fit_t_max},
          {"average_t_min", c.analysis.average_t_min},
          {"average_t_max", c.analysis.average_t_max},
          {"distance_min", c.analysis.distance_min},
          {"distance_max", c.analysis.distance_max},
          {"parity", enum_name(c.analysis.parity, kParityNames)}}},
        {"tb",
         {{"energy", c.tb.energy},
          {"hopping", c.tb.hopping},
          {"disorder", c.tb.disorder},
          {"k_max", c.tb.k_max},
          {"n_sites", c.tb.n_sites},
          {"seeds", c.tb.seeds}}},
        {"pulse",
         {{"g_max", c.pulse.g_max},
          {"t_ramp", c.pulse.t_ramp},
          {"swap_area", c.pulse.swap_area},
          {"omega_max", c.pulse.omega_max},
          {"dt", c.pulse.dt},
          {"sample_dt", c.pulse.sample_dt}}},
    };
}

// ---------------------------------------------------------------------------
// Validation

WalkerState initial_state(const ExperimentConfig &c) {
    const LatticeSpec spec(c.n_sites, c.topology);
    if (!c.initial_state.empty()) {
        return superposition_state(spec, c.initial_state);
    }
    if (c.experiment == ExperimentKind::DoubleSite) {
        // Sites at angles +pi/2 and -pi/2.
        const StateTerm terms[] = {{c.n_sites / 4, Spin::Down, 1.0}, {3 * c.n_sites / 4, Spin::Up, 1.0}};
        return superposition_state(spec, terms);
    }
    return localized_state(spec, 0, Spin::Down);
}

void validate(const ExperimentConfig &raw) {
    const ExperimentConfig c = resolve(raw);
    if (c.threads < 1) {
        throw ConfigError("threads", "must be >= 1");
    }
    if (c.n_runs < 1) {
        throw ConfigError("n_runs", "must be >= 1");
    }
    if (c.experiment == ExperimentKind::Pulse) {
        const PulseParams &p = c.pulse;
        if (!(p.g_max > 0.0 && p.g_max <= pulse::kMaxCoupling)) {
            throw ConfigError("pulse.g_max", "must lie in (0, " + format_number(pulse::kMaxCoupling) + "] rad/ns");
        }
        if (!(p.omega_max > 0.0 && p.omega_max <= pulse::kMaxDetuning)) {
            throw ConfigError("pulse.omega_max",
                              "must lie in (0, " + format_number(pulse::kMaxDetuning) + "] rad/ns");
        }
        if (!(p.dt > 0.0)) {
            throw ConfigError("pulse.dt", "must be > 0");
        }
        if (!(p.sample_dt > 0.0)) {
            throw ConfigError("pulse.sample_dt", "must be > 0");
        }
        if (!(p.t_ramp >= 0.0)) {
            throw ConfigError("pulse.t_ramp", "must be >= 0");
        }
        if (!(p.swap_area > 0.0)) {
            throw ConfigError("pulse.swap_area", "must be > 0");
        }
        for (double area : {p.swap_area, std::numbers::pi / 4}) {
            try {
                pulse::trapezoid_for_area(p.g_max, p.t_ramp, area);
            } catch (const InvalidArgument &e) {
                throw ConfigError("pulse.t_ramp", e.what());
            }
        }
        return;
    }
    if (c.experiment == ExperimentKind::Lyapunov || c.experiment == ExperimentKind::Borland) {
        const TBParams &tb = c.tb;
        if (!(tb.hopping != 0.0)) {
            throw ConfigError("tb.hopping", "must be nonzero");
        }
        if (tb.disorder.empty()) {
            throw ConfigError("tb.disorder", "needs at least one value");
        }
        for (std::size_t i = 0; i < tb.disorder.size(); ++i) {
            if (!(tb.disorder[i] >= 0.0)) {
                throw ConfigError(index_path("tb.disorder", i), "must be >= 0");
            }
        }
        if (tb.k_max < 1000) {
            throw ConfigError("tb.k_max", "must be >= 1000");
        }
        if (c.experiment == ExperimentKind::Borland) {
            if (tb.n_sites < 3) {
                throw ConfigError("tb.n_sites", "must be >= 3");
            }
            if (tb.disorder.size() != 1) {
                throw ConfigError("tb.disorder", "borland takes a single W_tb");
            }
        }
        return;
    }

    if (c.n_sites < 2) {
        throw ConfigError("n_sites", "must be >= 2");
    }
    if (c.t_steps < 0) {
        throw ConfigError("t_steps", "must be >= 0");
    }
    if (c.W.empty()) {
        throw ConfigError("W", "needs at least one value");
    }
    for (std::size_t i = 0; i < c.W.size(); ++i) {
        if (!(c.W[i] >= 0.0 && c.W[i] <= 1.0)) {
            throw ConfigError(c.W.size() == 1 ? "W" : index_path("W", i), "must lie in [0, 1]");
        }
    }
    if (!(c.recurrence_tol > 0.0)) {
        throw ConfigError("recurrence_tol", "must be > 0");
    }
    const bool multi_w = c.experiment == ExperimentKind::DisorderScan || c.experiment == ExperimentKind::EightQubit;
    if (!multi_w && c.W.size() != 1) {
        throw ConfigError("W", std::string(to_string(c.experiment)) + " takes a single W");
    }
    if (needs_clean_walk(c.experiment) && c.W[0] != 0.0) {
        throw ConfigError("W", std::string(to_string(c.experiment)) + " runs the clean walk; W must be 0");
    }
    const bool circle_only = c.experiment == ExperimentKind::Recurrence ||
                             c.experiment == ExperimentKind::DisorderScan ||
                             c.experiment == ExperimentKind::EightQubit ||
                             c.experiment == ExperimentKind::OracleCheck || c.backend == Backend::QubitCircuit;
    if (circle_only && c.topology != Topology::Circle) {
        throw ConfigError("topology", std::string(to_string(c.experiment)) + " needs a circle");
    }
    if ((c.experiment == ExperimentKind::OracleCheck || c.backend == Backend::QubitCircuit) &&
        c.n_sites > oracle::kMaxOracleSites) {
        throw ConfigError("n_sites", "the qubit circuit handles at most " +
                                         std::to_string(oracle::kMaxOracleSites) + " sites");
    }
    if (c.experiment == ExperimentKind::DoubleSite && c.initial_state.empty() && c.n_sites % 4 != 0) {
        throw ConfigError("initial_state", "the default two-site start needs n_sites divisible by 4");
    }
    const LatticeSpec spec(c.n_sites, c.topology);
    try {
        (void)initial_state(c);
    } catch (const InvalidArgument &e) {
        throw ConfigError("initial_state", e.what());
    }
    if (c.topology == Topology::Line) {
        for (std::size_t i = 0; i < c.initial_state.size() + (c.initial_state.empty() ? 1 : 0); ++i) {
            const int site = c.initial_state.empty() ? 0 : c.initial_state[i].site;
            const int d = spec.signed_distance(site);
            const int room = std::min(spec.max_distance() - d, d - spec.min_distance());
            if (c.t_steps > room) {
                throw ConfigError("t_steps", "the walker can reach an end of the line after " +
                                                 std::to_string(room) + " steps");
            }
        }
    }
    const AnalysisParams &a = c.analysis;
    if (c.experiment == ExperimentKind::SigmaFit) {
        if (a.fit_t_min < 0 || a.fit_t_max > c.t_steps || a.fit_t_max - a.fit_t_min < 1) {
            throw ConfigError("analysis.fit_t_max", "fit window must hold >= 2 steps within [0, t_steps]");
        }
    }
    if (multi_w) {
        if (a.average_t_min < 0 || a.average_t_max > c.t_steps || a.average_t_min > a.average_t_max) {
            throw ConfigError("analysis.average_t_min", "averaging window must lie within [0, t_steps]");
        }
    }
    if (c.experiment == ExperimentKind::DisorderScan) {
        if (a.distance_min < 1) {
            throw ConfigError("analysis.distance_min", "must be >= 1");
        }
        if (a.distance_max > spec.max_distance() || a.distance_max <= a.distance_min) {
            throw ConfigError("analysis.distance_max", "must lie in (distance_min, " +
                                                           std::to_string(spec.max_distance()) + "]");
        }
    }
}

// ---------------------------------------------------------------------------
// Result files

std::string format_csv(const Table &table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i];
    }
    out += '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::vector<std::filesystem::path> write_bundle(const ResultBundle &bundle, const std::filesystem::path &dir) {
    std::vector<std::filesystem::path> written;
    for (const auto &[name, table] : bundle.tables) {
        const auto path = dir / (name + ".csv");
        write_file_atomic(path, format_csv(table));
        written.push_back(path);
    }
    const auto summary = dir / "summary.json";
    write_file_atomic(summary, bundle.summary.dump(2) + "\n");
    written.push_back(summary);
    return written;
}

json realization_to_json(const DisorderRealization &r) {
    return {{"W", r.strength()},
            {"seed", r.seed()},
            {"mode", enum_name(r.mode(), kModeNames)},
            {"phases", std::vector<double>(r.phases().begin(), r.phases().end())}};
}

DisorderRealization realization_from_json(const json &value, const LatticeSpec &spec) {
    ObjectReader r(value, "realization");
    double w = 0.0;
    std::uint64_t seed = 0;
    DisorderMode mode = DisorderMode::Static;
    std::vector<double> phases;
    read_if(r, "W", w, as_double);
    read_if(r, "seed", seed, as_seed);
    read_if(r, "mode", mode, [](const json &v, const std::string &p) { return as_enum(v, p, kModeNames); });
    const json *ph = r.find("phases");
    if (ph == nullptr || !ph->is_array()) {
        throw ConfigError(r.path("phases"), "expected a list of angles");
    }
    for (std::size_t i = 0; i < ph->size(); ++i) {
        phases.push_back(as_double((*ph)[i], index_path(r.path("phases"), i)));
    }
    r.finish();
    try {
        return DisorderRealization(spec, w, seed, mode, std::move(phases));
    } catch (const InvalidArgument &e) {
        throw ConfigError("realization", e.what());
    }
}

// ---------------------------------------------------------------------------
// Walk experiments

namespace {

struct EnsembleRun {
    double W = 0.0;
    std::vector<DisorderRealization> realizations;
    /// Ensemble-mean site probabilities, [t][site].
    std::vector<std::vector<double>> mean;
    /// States of realization 0, when requested.
    std::vector<WalkerState> snapshots;
};

EnsembleRun run_ensemble(const ExperimentConfig &c, const WalkerState &init, double w) {
    EnsembleRun out;
    out.W = w;
    const LatticeSpec &spec = init.spec();
    // Every W = 0 member is the same clean walk.
    const int runs = w == 0.0 ? 1 : c.n_runs;
    if (w > 0.0) {
        out.realizations = ensemble(spec, w, runs, c.master_seed, c.disorder_mode);
    }
    std::vector<std::vector<StepReport>> per_run(static_cast<std::size_t>(runs));
    parallel_for(runs, c.threads, [&](int i) {
        const DisorderRealization *r = w > 0.0 ? &out.realizations[static_cast<std::size_t>(i)] : nullptr;
        if (c.backend == Backend::QubitCircuit) {
            per_run[static_cast<std::size_t>(i)] = oracle::qubit_layer_oracle(init, c.t_steps, r);
        } else {
            per_run[static_cast<std::size_t>(i)] =
                run(init, c.t_steps, r, RunOptions{c.snapshot_states && i == 0});
        }
    });
    const std::size_t n = spec.dimension() / 2;
    out.mean.assign(static_cast<std::size_t>(c.t_steps) + 1, std::vector<double>(n, 0.0));
    for (const auto &reports : per_run) {
        for (std::size_t t = 0; t < reports.size(); ++t) {
            for (std::size_t k = 0; k < n; ++k) {
                out.mean[t][k] += reports[t].site_probabilities[k];
            }
        }
    }
    for (auto &row : out.mean) {
        for (double &p : row) {
            p /= static_cast<double>(runs);
        }
    }
    if (c.snapshot_states && c.backend == Backend::Engine) {
        for (const StepReport &rep : per_run.front()) {
            out.snapshots.push_back(*rep.snapshot);
        }
    }
    return out;
}

Table probability_table(const std::vector<std::vector<double>> &mean) {
    Table t;
    t.columns.push_back("t");
    for (std::size_t k = 0; k < mean.front().size(); ++k) {
        t.columns.push_back("p_site_" + std::to_string(k));
    }
    for (std::size_t step = 0; step < mean.size(); ++step) {
        std::vector<double> row{static_cast<double>(step)};
        row.insert(row.end(), mean[step].begin(), mean[step].end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table moments_table(const LatticeSpec &spec, const std::vector<std::vector<double>> &mean) {
    Table t;
    t.columns = {"t", "sigma", "participation_ratio"};
    if (spec.topology() == Topology::Circle) {
        t.columns.push_back("mu1");
    }
    for (std::size_t step = 0; step < mean.size(); ++step) {
        const SiteDistribution dist(spec, mean[step]);
        std::vector<double> row{static_cast<double>(step), position_std_dev(dist), participation_ratio(dist)};
        if (spec.topology() == Topology::Circle) {
            row.push_back(first_moment(dist));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table snapshot_table(const std::vector<WalkerState> &states) {
    Table t;
    t.columns.push_back("t");
    const LatticeSpec &spec = states.front().spec();
    for (std::size_t i = 0; i < spec.dimension(); ++i) {
        const auto [site, spin] = basis_site_spin(spec, i);
        const std::string tag = std::to_string(site) + (spin == Spin::Down ? "_dn" : "_up");
        t.columns.push_back("re_" + tag);
        t.columns.push_back("im_" + tag);
    }
    for (std::size_t step = 0; step < states.size(); ++step) {
        std::vector<double> row{static_cast<double>(step)};
        for (const Complex &a : states[step].amplitudes()) {
            row.push_back(a.real());
            row.push_back(a.imag());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<double> mu1_series(const LatticeSpec &spec, const std::vector<std::vector<double>> &mean) {
    std::vector<double> out;
    for (const auto &p : mean) {
        out.push_back(first_moment(SiteDistribution(spec, p)));
    }
    return out;
}

void record_realizations(json &summary, const EnsembleRun &run) {
    if (!summary.contains("realizations")) {
        summary["realizations"] = json::array();
    }
    for (std::size_t i = 0; i < run.realizations.size(); ++i) {
        json r = realization_to_json(run.realizations[i]);
        r["index"] = i;
        summary["realizations"].push_back(std::move(r));
    }
}

void add_walk_outputs(ResultBundle &b, const LatticeSpec &spec, const EnsembleRun &run) {
    b.tables["probabilities"] = probability_table(run.mean);
    b.tables["moments"] = moments_table(spec, run.mean);
    if (!run.snapshots.empty()) {
        b.tables["states"] = snapshot_table(run.snapshots);
    }
    b.summary["n_runs_used"] = run.W == 0.0 ? 1 : b.config.n_runs;
    record_realizations(b.summary, run);
}

void run_walk(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const WalkerState init = initial_state(c);
    const EnsembleRun run = run_ensemble(c, init, c.W[0]);
    add_walk_outputs(b, init.spec(), run);
    if (c.W[0] == 0.0 && c.topology == Topology::Circle && c.t_steps >= 1) {
        const auto period = recurrence_period(init, c.t_steps, c.recurrence_tol);
        b.summary["recurrence_found"] = period.has_value();
        b.summary["recurrence_period"] = period ? json(*period) : json(nullptr);
    }
}

void run_recurrence(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const WalkerState init = initial_state(c);
    const EnsembleRun run = run_ensemble(c, init, 0.0);
    b.tables["probabilities"] = probability_table(run.mean);
    Table dev;
    dev.columns = {"t", "max_deviation_from_t0"};
    for (std::size_t t = 0; t < run.mean.size(); ++t) {
        double d = 0.0;
        for (std::size_t k = 0; k < run.mean[t].size(); ++k) {
            d = std::max(d, std::abs(run.mean[t][k] - run.mean[0][k]));
        }
        dev.rows.push_back({static_cast<double>(t), d});
    }
    b.tables["recurrence"] = std::move(dev);
    const auto period = c.t_steps >= 1 ? recurrence_period(init, c.t_steps, c.recurrence_tol) : std::nullopt;
    b.summary["recurrence_found"] = period.has_value();
    b.summary["recurrence_period"] = period ? json(*period) : json(nullptr);
}

void run_sigma_fit(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const WalkerState init = initial_state(c);
    const EnsembleRun run = run_ensemble(c, init, 0.0);
    b.tables["probabilities"] = probability_table(run.mean);
    Table sigma;
    sigma.columns = {"t", "sigma"};
    std::vector<double> xs, ys;
    for (std::size_t t = 0; t < run.mean.size(); ++t) {
        const double s = position_std_dev(SiteDistribution(init.spec(), run.mean[t]));
        sigma.rows.push_back({static_cast<double>(t), s});
        const int ti = static_cast<int>(t);
        if (ti >= c.analysis.fit_t_min && ti <= c.analysis.fit_t_max) {
            xs.push_back(static_cast<double>(t));
            ys.push_back(s);
        }
    }
    b.tables["sigma"] = std::move(sigma);
    json fit = fit_to_json(fit_linear(xs, ys));
    fit["t_min"] = c.analysis.fit_t_min;
    fit["t_max"] = c.analysis.fit_t_max;
    b.summary["sigma_fit"] = fit;
}

Table mu1_table(const std::vector<double> &ws, const std::vector<std::vector<double>> &series) {
    Table t;
    t.columns.push_back("t");
    for (double w : ws) {
        t.columns.push_back(w_label("mu1_", w));
    }
    for (std::size_t step = 0; step < series.front().size(); ++step) {
        std::vector<double> row{static_cast<double>(step)};
        for (const auto &s : series) {
            row.push_back(s[step]);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void run_disorder_scan(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const WalkerState init = initial_state(c);
    const LatticeSpec &spec = init.spec();
    std::vector<std::vector<double>> mu1;
    Table pr;
    pr.columns.push_back("t");
    Table profile;
    profile.columns = {"W", "signed_distance", "mean_probability"};
    json scan = json::array();
    std::vector<std::vector<double>> pr_series;
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double w : c.W) {
        const EnsembleRun run = run_ensemble(c, init, w);
        record_realizations(b.summary, run);
        mu1.push_back(mu1_series(spec, run.mean));
        pr.columns.push_back(w_label("pr_", w));
        std::vector<double> prs;
        for (const auto &p : run.mean) {
            prs.push_back(participation_ratio(SiteDistribution(spec, p)));
        }
        pr_series.push_back(std::move(prs));
        const SiteDistribution final_dist(spec, run.mean.back());
        for (int d = spec.min_distance(); d <= spec.max_distance(); ++d) {
            profile.rows.push_back({w, static_cast<double>(d), final_dist.at_distance(d)});
        }
        const double avg = time_average(mu1.back(), c.analysis.average_t_min, c.analysis.average_t_max);
        monotone = monotone && avg <= previous;
        previous = avg;
        json entry = {{"W", w},
                      {"n_runs", w == 0.0 ? 1 : c.n_runs},
                      {"time_averaged_mu1", avg},
                      {"final_participation_ratio", participation_ratio(final_dist)}};
        try {
            const LocalizationFit fit = localization_length_fit(
                final_dist, DistanceWindow{c.analysis.distance_min, c.analysis.distance_max, c.analysis.parity});
            entry["localization"] = {{"fit", fit_to_json(fit.fit)},
                                     {"xi", fit.extended ? json(nullptr) : json(fit.xi)},
                                     {"extended", fit.extended},
                                     {"distances", fit.distances},
                                     {"bin_probabilities", fit.bin_probabilities}};
        } catch (const InvalidArgument &e) {
            entry["localization"] = {{"error", e.what()}};
        }
        scan.push_back(std::move(entry));
    }
    for (std::size_t step = 0; step <= static_cast<std::size_t>(c.t_steps); ++step) {
        std::vector<double> row{static_cast<double>(step)};
        for (const auto &s : pr_series) {
            row.push_back(s[step]);
        }
        pr.rows.push_back(std::move(row));
    }
    b.tables["mu1"] = mu1_table(c.W, mu1);
    b.tables["participation_ratio"] = std::move(pr);
    b.tables["distance_profile"] = std::move(profile);
    b.summary["scan"] = scan;
    b.summary["averaging_window"] = {c.analysis.average_t_min, c.analysis.average_t_max};
    b.summary["mu1_monotone_non_increasing"] = monotone;
}

// Local maxima of a ring distribution, largest first.
std::vector<int> ring_peaks(const std::vector<double> &p) {
    const int n = static_cast<int>(p.size());
    std::vector<int> peaks;
    for (int k = 0; k < n; ++k) {
        const double left = p[static_cast<std::size_t>((k + n - 1) % n)];
        const double right = p[static_cast<std::size_t>((k + 1) % n)];
        const double here = p[static_cast<std::size_t>(k)];
        if (here >= left && here >= right && here > 0.0) {
            peaks.push_back(k);
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](int a, int b) { return p[static_cast<std::size_t>(a)] > p[static_cast<std::size_t>(b)]; });
    return peaks;
}

void run_double_site(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const WalkerState init = initial_state(c);
    const LatticeSpec &spec = init.spec();
    const EnsembleRun run = run_ensemble(c, init, c.W[0]);
    add_walk_outputs(b, spec, run);
    Table profile;
    profile.columns = {"site", "signed_distance", "mean_probability"};
    const auto &final_p = run.mean.back();
    for (int k = 0; k < c.n_sites; ++k) {
        profile.rows.push_back({static_cast<double>(k), static_cast<double>(spec.signed_distance(k)),
                                final_p[static_cast<std::size_t>(k)]});
    }
    b.tables["final_profile"] = std::move(profile);
    std::vector<int> seeds;
    for (std::size_t i = 0; i < spec.dimension(); ++i) {
        if (init.amplitudes()[i] != Complex(0.0)) {
            const int site = basis_site_spin(spec, i).first;
            if (std::find(seeds.begin(), seeds.end(), site) == seeds.end()) {
                seeds.push_back(site);
            }
        }
    }
    std::vector<int> peaks = ring_peaks(final_p);
    if (peaks.size() > 2) {
        peaks.resize(2);
    }
    json peak_values = json::array();
    for (int k : peaks) {
        peak_values.push_back(final_p[static_cast<std::size_t>(k)]);
    }
    b.summary["seed_sites"] = seeds;
    b.summary["peak_sites"] = peaks;
    b.summary["peak_probabilities"] = peak_values;
}

void run_eight_qubit(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const WalkerState init = initial_state(c);
    const LatticeSpec &spec = init.spec();
    std::vector<std::vector<double>> mu1;
    json per_w = json::array();
    for (double w : c.W) {
        const EnsembleRun run = run_ensemble(c, init, w);
        record_realizations(b.summary, run);
        mu1.push_back(mu1_series(spec, run.mean));
        const auto period = series_period(mu1.back(), 1e-9);
        per_w.push_back({{"W", w},
                         {"n_runs", w == 0.0 ? 1 : c.n_runs},
                         {"time_averaged_mu1",
                          time_average(mu1.back(), c.analysis.average_t_min, c.analysis.average_t_max)},
                         {"max_mu1", *std::max_element(mu1.back().begin(), mu1.back().end())},
                         {"mu1_period", period ? json(*period) : json(nullptr)}});
    }
    b.tables["mu1"] = mu1_table(c.W, mu1);
    b.summary["series"] = per_w;
    b.summary["averaging_window"] = {c.analysis.average_t_min, c.analysis.average_t_max};
    b.summary["backend"] = enum_name(c.backend, kBackendNames);
}

void run_oracle_check(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const WalkerState init = initial_state(c);
    const LatticeSpec &spec = init.spec();
    const double w = c.W[0];
    std::vector<DisorderRealization> rs;
    if (w > 0.0) {
        rs = ensemble(spec, w, c.n_runs, c.master_seed, c.disorder_mode);
    }
    const int runs = w > 0.0 ? c.n_runs : 1;
    std::vector<double> deviation(static_cast<std::size_t>(runs), 0.0);
    parallel_for(runs, c.threads, [&](int i) {
        const DisorderRealization *r = w > 0.0 ? &rs[static_cast<std::size_t>(i)] : nullptr;
        const auto engine = run(init, c.t_steps, r);
        const auto circuit = oracle::qubit_layer_oracle(init, c.t_steps, r);
        double d = 0.0;
        for (std::size_t t = 0; t < engine.size(); ++t) {
            for (std::size_t k = 0; k < engine[t].site_probabilities.size(); ++k) {
                d = std::max(d, std::abs(engine[t].site_probabilities[k] - circuit[t].site_probabilities[k]));
            }
        }
        deviation[static_cast<std::size_t>(i)] = d;
    });
    Table t;
    t.columns = {"realization", "max_deviation"};
    for (std::size_t i = 0; i < deviation.size(); ++i) {
        t.rows.push_back({static_cast<double>(i), deviation[i]});
    }
    b.tables["oracle_deviation"] = std::move(t);
    b.summary["max_deviation"] = *std::max_element(deviation.begin(), deviation.end());
    b.summary["realizations"] = json::array();
    for (std::size_t i = 0; i < rs.size(); ++i) {
        json r = realization_to_json(rs[i]);
        r["index"] = i;
        b.summary["realizations"].push_back(std::move(r));
    }
}

// ---------------------------------------------------------------------------
// Tight-binding experiments

std::vector<std::uint64_t> tb_seeds(const ExperimentConfig &c) {
    if (!c.tb.seeds.empty()) {
        return c.tb.seeds;
    }
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < c.n_runs; ++i) {
        seeds.push_back(derive_seed(c.master_seed, static_cast<std::uint64_t>(i)));
    }
    return seeds;
}

void run_lyapunov(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const std::vector<std::uint64_t> seeds = tb_seeds(c);
    const int n_w = static_cast<int>(c.tb.disorder.size());
    const int n_s = static_cast<int>(seeds.size());
    std::vector<tb::LyapunovEstimate> est(static_cast<std::size_t>(n_w * n_s));
    parallel_for(n_w * n_s, c.threads, [&](int job) {
        const double w = c.tb.disorder[static_cast<std::size_t>(job / n_s)];
        est[static_cast<std::size_t>(job)] =
            tb::lyapunov_exponent(c.tb.energy, w, c.tb.hopping, c.tb.k_max, seeds[static_cast<std::size_t>(job % n_s)]);
    });
    Table t;
    t.columns = {"W_tb", "seed_index", "lambda1", "log_growth_rate", "standard_error"};
    json per_w = json::array();
    for (int wi = 0; wi < n_w; ++wi) {
        std::vector<double> l;
        for (int si = 0; si < n_s; ++si) {
            const auto &e = est[static_cast<std::size_t>(wi * n_s + si)];
            t.rows.push_back({c.tb.disorder[static_cast<std::size_t>(wi)], static_cast<double>(si), e.lambda1,
                              e.log_growth_rate, e.standard_error});
            l.push_back(e.lambda1);
        }
        double mean = 0.0;
        for (double x : l) {
            mean += x;
        }
        mean /= static_cast<double>(l.size());
        double var = 0.0;
        for (double x : l) {
            var += (x - mean) * (x - mean);
        }
        const double sd = l.size() > 1 ? std::sqrt(var / static_cast<double>(l.size() - 1)) : 0.0;
        per_w.push_back({{"W_tb", c.tb.disorder[static_cast<std::size_t>(wi)]},
                         {"mean_lambda1", mean},
                         {"std_lambda1", sd},
                         {"cv", mean > 0.0 ? json(sd / mean) : json(nullptr)},
                         {"localization_length", mean > 0.0 ? json(1.0 / mean) : json(nullptr)}});
    }
    b.tables["lyapunov"] = std::move(t);
    b.summary["lyapunov"] = per_w;
    b.summary["seeds"] = seeds;
}

void run_borland(ResultBundle &b) {
    const ExperimentConfig &c = b.config;
    const std::vector<std::uint64_t> seeds = tb_seeds(c);
    const tb::BorlandReport r =
        tb::borland_check(c.tb.energy, c.tb.disorder.front(), c.tb.hopping, c.tb.n_sites, seeds, c.tb.k_max);
    Table t;
    t.columns = {"seed_index", "energy", "xi_decay_times_lambda1"};
    for (std::size_t i = 0; i < r.per_seed_ratio.size(); ++i) {
        t.rows.push_back({static_cast<double>(i), r.per_seed_energy[i], r.per_seed_ratio[i]});
    }
    b.tables["borland"] = std::move(t);
    b.summary["borland"] = {{"xi_from_decay", r.xi_from_decay},
                            {"xi_from_lyapunov", r.xi_from_lyapunov},
                            {"ratio", r.ratio},
                            {"extended", r.extended}};
    b.summary["seeds"] = seeds;
}

// ---------------------------------------------------------------------------
// Pulse experiment

void append_schedule_rows(Table &t, const pulse::TwoQubitSchedule &s, double offset, double sample_dt) {
    const double total = s.duration();
    const long n = static_cast<long>(std::ceil(total / sample_dt - 1e-9));
    for (long i = 0; i <= n; ++i) {
        const double local = std::min(total, sample_dt * static_cast<double>(i));
        t.rows.push_back({offset + local, s.coupling.sample(local), s.omega1.sample(local), s.omega2.sample(local)});
    }
}

json matrix_to_json(const Eigen::MatrixXcd &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

void run_pulse(ResultBundle &b) {
    const PulseParams &p = b.config.pulse;
    const std::vector<std::string> columns = {"t_ns", "g_rad_per_ns", "omega1_rad_per_ns", "omega2_rad_per_ns"};

    const pulse::TrapezoidPulse swap = pulse::trapezoid_for_area(p.g_max, p.t_ramp, p.swap_area);
    const pulse::TwoQubitSchedule swap_schedule = pulse::coupling_schedule(swap.profile());
    const Eigen::Matrix4cd u = pulse::propagate(swap_schedule, p.dt);
    Eigen::Matrix4cd target = Eigen::Matrix4cd::Identity();
    target.block<2, 2>(1, 1) = pulse::swap_block();
    Table swap_table;
    swap_table.columns = columns;
    append_schedule_rows(swap_table, swap_schedule, 0.0, p.sample_dt);
    b.tables["swap_schedule"] = std::move(swap_table);
    b.summary["swap"] = {
        {"t_ramp_ns", swap.t_ramp_up},
        {"t_plateau_ns", swap.t_plateau},
        {"duration_ns", swap.duration()},
        {"area", swap_schedule.coupling.area()},
        {"fidelity_per_block_phase", pulse::gate_fidelity(u, target, pulse::PhaseCorrection::PerExcitationBlock)},
        {"fidelity_global_phase", pulse::gate_fidelity(u, target, pulse::PhaseCorrection::Global)},
        {"fidelity_uncorrected", pulse::gate_fidelity(u, target, pulse::PhaseCorrection::None)},
        {"unitary", matrix_to_json(u)}};

    pulse::EulerOptions eo;
    eo.g_max = p.g_max;
    eo.t_ramp = p.t_ramp;
    eo.omega_max = p.omega_max;
    eo.dt = p.dt;
    const pulse::EulerReport euler = pulse::euler_cross_hadamard(eo);
    Table euler_table;
    euler_table.columns = columns;
    const double half_pi = std::numbers::pi / 2;
    const auto first = pulse::z_rotation_schedule(half_pi, p.omega_max);
    const auto middle = pulse::coupling_schedule(pulse::trapezoid_for_area(p.g_max, p.t_ramp, eo.middle_area).profile());
    const auto last = pulse::z_rotation_schedule(-half_pi, p.omega_max);
    append_schedule_rows(euler_table, first, 0.0, p.sample_dt);
    append_schedule_rows(euler_table, middle, first.duration(), p.sample_dt);
    append_schedule_rows(euler_table, last, first.duration() + middle.duration(), p.sample_dt);
    b.tables["euler_schedule"] = std::move(euler_table);
    b.summary["cross_hadamard"] = {{"symbolic_deviation", euler.symbolic_deviation},
                                   {"pulsed_deviation", euler.pulsed_deviation},
                                   {"total_duration_ns", euler.total_duration},
                                   {"pulsed_block", matrix_to_json(euler.pulsed)}};

    // Same area, three shapes: only the area should matter.
    const double area = p.swap_area;
    const pulse::PulseProfile shapes[] = {swap.profile(), pulse::PulseProfile::triangle(2.0 * area / p.g_max, p.g_max),
                                          pulse::PulseProfile::rectangle(area / p.g_max, p.g_max)};
    const Eigen::Matrix2cd reference = pulse::single_excitation_block(u);
    double worst = 0.0;
    for (const auto &shape : shapes) {
        const Eigen::Matrix2cd blk =
            pulse::single_excitation_block(pulse::propagate(pulse::coupling_schedule(shape), p.dt));
        worst = std::max(worst, (blk - reference).cwiseAbs().maxCoeff());
    }
    b.summary["area_theorem"] = {{"area", area}, {"max_block_deviation", worst}};
}

}  // namespace

ResultBundle run_experiment(const ExperimentConfig &config) {
    validate(config);
    ResultBundle b;
    b.config = resolve(config);
    b.summary["experiment"] = std::string(to_string(b.config.experiment));
    b.summary["config"] = config_to_json(b.config);
    b.summary["master_seed"] = b.config.master_seed;
    if (is_walk_experiment(b.config.experiment)) {
        b.summary["timing"] = timing_metadata(b.config.t_steps);
    }
    switch (b.config.experiment) {
        case ExperimentKind::Walk:
            run_walk(b);
            break;
        case ExperimentKind::Recurrence:
            run_recurrence(b);
            break;
        case ExperimentKind::SigmaFit:
            run_sigma_fit(b);
            break;
        case ExperimentKind::DisorderScan:
            run_disorder_scan(b);
            break;
        case ExperimentKind::DoubleSite:
            run_double_site(b);
            break;
        case ExperimentKind::EightQubit:
            run_eight_qubit(b);
            break;
        case ExperimentKind::OracleCheck:
            run_oracle_check(b);
            break;
        case ExperimentKind::Lyapunov:
            run_lyapunov(b);
            break;
        case ExperimentKind::Borland:
            run_borland(b);
            break;
        case ExperimentKind::Pulse:
            run_pulse(b);
            break;
    }
    return b;
}

// ---------------------------------------------------------------------------
// Plot data

const std::vector<std::string> &figure_ids() {
    static const std::vector<std::string> ids = {"fig3", "fig5", "fig6a", "fig6b", "fig7", "fig8", "double_site"};
    return ids;
}

namespace {

const Table &need(const ResultBundle &b, std::string_view figure, const std::string &series, const char *producer) {
    auto it = b.tables.find(series);
    if (it == b.tables.end()) {
        throw InvalidArgument(std::string(figure) + " needs series '" + series + "' (produced by " + producer +
                              "); the bundle came from " + std::string(to_string(b.config.experiment)));
    }
    return it->second;
}

}  // namespace

std::vector<std::filesystem::path> emit_plotdata(const ResultBundle &b, std::string_view figure_id,
                                                 const std::filesystem::path &dir) {
    const auto &ids = figure_ids();
    if (std::find(ids.begin(), ids.end(), figure_id) == ids.end()) {
        std::string valid;
        for (const auto &id : ids) {
            valid += (valid.empty() ? "" : ", ") + id;
        }
        throw InvalidArgument("unknown figure id '" + std::string(figure_id) + "'; valid ids: " + valid);
    }
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string &name, const std::string &contents) {
        const auto path = dir / name;
        write_file_atomic(path, contents);
        written.push_back(path);
    };

    if (figure_id == "fig3") {
        const Table &p = need(b, figure_id, "probabilities", "walk");
        const LatticeSpec spec(static_cast<int>(p.columns.size()) - 1, b.config.topology);
        Table out;
        out.columns = {"t", "signed_distance", "probability"};
        for (const auto &row : p.rows) {
            for (int d = spec.min_distance(); d <= spec.max_distance(); ++d) {
                out.rows.push_back({row[0], static_cast<double>(d),
                                    row[static_cast<std::size_t>(spec.site_at_distance(d)) + 1]});
            }
        }
        emit("fig3_heatmap.csv", format_csv(out));
    } else if (figure_id == "fig5") {
        emit("fig5_sigma.csv", format_csv(need(b, figure_id, "sigma", "sigma_fit")));
        emit("fig5_fit.json", b.summary.at("sigma_fit").dump(2) + "\n");
    } else if (figure_id == "fig6a") {
        emit("fig6a_mu1.csv", format_csv(need(b, figure_id, "mu1", "disorder_scan")));
    } else if (figure_id == "fig6b") {
        const Table &p = need(b, figure_id, "distance_profile", "disorder_scan");
        Table out;
        out.columns = {"W", "signed_distance", "mean_probability", "log_mean_probability"};
        for (const auto &row : p.rows) {
            out.rows.push_back({row[0], row[1], row[2], std::log(row[2])});
        }
        emit("fig6b_profile.csv", format_csv(out));
    } else if (figure_id == "fig7") {
        emit("fig7_swap_schedule.csv", format_csv(need(b, figure_id, "swap_schedule", "pulse")));
        emit("fig7_euler_schedule.csv", format_csv(need(b, figure_id, "euler_schedule", "pulse")));
    } else if (figure_id == "fig8") {
        emit("fig8_mu1.csv", format_csv(need(b, figure_id, "mu1", "eight_qubit")));
    } else {
        const Table &p = need(b, figure_id, "final_profile", "double_site");
        Table out;
        out.columns = {"signed_distance", "mean_probability"};
        for (const auto &row : p.rows) {
            out.rows.push_back({row[1], row[2]});
        }
        std::sort(out.rows.begin(), out.rows.end());
        emit("double_site_profile.csv", format_csv(out));
    }
    return written;
}

}  // namespace qwalk::harness
