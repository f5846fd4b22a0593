#pragma once

#include "gumdp/bounds.hpp"
#include "gumdp/chain.hpp"
#include "gumdp/errors.hpp"
#include "gumdp/exact.hpp"
#include "gumdp/io.hpp"
#include "gumdp/model.hpp"
#include "gumdp/random.hpp"
#include "gumdp/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <limits>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace gumdp {

inline constexpr std::string_view kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Bootstrap
// ---------------------------------------------------------------------------

struct Interval {
    double low;
    double high;

    bool contains(double x) const { return low <= x && x <= high; }
    double half_width() const { return 0.5 * (high - low); }
};

/// Linear-interpolation quantile of sorted data (the common "type 7" rule).
inline double sorted_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ValidationError("quantile of an empty sample");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Percentile bootstrap interval for the mean.
inline Interval bootstrap_ci(std::span<const double> samples, double level, std::size_t resamples,
                             RandomStream& rs) {
    if (samples.size() < 2) throw ValidationError("bootstrap needs at least two samples");
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("ci_level must lie in (0, 1)");
    if (resamples < 1) throw ValidationError("bootstrap_resamples must be positive");
    const std::size_t n = samples.size();
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += samples[rs.index(n)];
        m = sum / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    return {sorted_quantile(means, (1.0 - level) / 2.0), sorted_quantile(means, (1.0 + level) / 2.0)};
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

/// One (setting, gamma, H, K) grid cell. Average-setting cells carry no gamma
/// and no H; discounted cells with infinite_horizon use effective_horizon(gamma).
struct GridCell {
    Setting setting = Setting::discounted;
    double gamma = 0.0;
    int H = 0;
    bool infinite_horizon = false;
    int K = 1;

    /// Sort key (gamma, H, K); the average setting is the gamma -> 1 limit and sorts last.
    auto key() const {
        const double g = setting == Setting::average ? 2.0 : gamma;
        const int h = setting == Setting::average ? std::numeric_limits<int>::max() : H;
        return std::make_tuple(g, h, K);
    }
};

struct ExperimentConfig {
    std::string gumdp;
    bool state_only = false;
    std::optional<double> noise_eps;
    /// Preset name, or an explicit |S| x |A| matrix.
    std::variant<std::string, Matrix> policy = std::string("uniform");
    std::vector<GridCell> cells;
    std::size_t N = 10000;
    std::vector<std::uint64_t> seeds;
    std::uint64_t master_seed = 0;
    double ci_level = 0.95;
    std::size_t bootstrap_resamples = 1000;
    std::string output;
    unsigned threads = 0;
    std::string timestamp;

    void validate() const {
        if (gumdp.empty()) throw ValidationError("gumdp: missing");
        if (cells.empty()) throw ValidationError("grid: no cells");
        if (seeds.empty()) throw ValidationError("seeds: at least one seed is required");
        if (N < 1) throw ValidationError("N: must be positive");
        if (!(ci_level > 0.0 && ci_level < 1.0)) throw ValidationError("ci_level: must lie in (0, 1)");
        if (bootstrap_resamples < 1) throw ValidationError("bootstrap_resamples: must be positive");
        if (output.empty()) throw ValidationError("output: missing");
        if (noise_eps && !(*noise_eps > 0.0 && *noise_eps < 1.0))
            throw ValidationError("noise_eps: must lie in (0, 1)");
        for (const auto& c : cells) {
            if (c.K < 1) throw ValidationError("grid.K: values must be positive integers");
            if (c.setting == Setting::discounted) {
                if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw ValidationError("grid.gamma: must lie in [0, 1)");
                if (!c.infinite_horizon && c.H < 1) throw ValidationError("grid.H: values must be positive");
            }
        }
    }
};

namespace detail {

inline std::vector<int> int_list(const Json& v, const std::string& path) {
    std::vector<int> out;
    if (!v.is_array() || v.empty()) throw ValidationError(path + ": expected a non-empty array");
    for (const auto& x : v) out.push_back(positive_int(x, path));
    return out;
}

/// Expands one grid block {"K": [...], "H": [..., "infinite"], "gamma": [..., "average"]}.
inline void expand_grid_block(const Json& block, std::vector<GridCell>& out) {
    if (!block.is_object()) throw ValidationError("grid: expected an object or array of objects");
    const auto Ks = int_list(require(block, "K"), "grid.K");
    const Json& gammas = require(block, "gamma");
    if (!gammas.is_array() || gammas.empty()) throw ValidationError("grid.gamma: expected a non-empty array");
    std::vector<std::pair<int, bool>> Hs;
    if (auto it = block.find("H"); it != block.end()) {
        if (!it->is_array() || it->empty()) throw ValidationError("grid.H: expected a non-empty array");
        for (const auto& h : *it) {
            if (h.is_string()) {
                const auto s = h.get<std::string>();
                if (s != "infinite" && s != "inf") throw ValidationError("grid.H: unknown value '" + s + "'");
                Hs.emplace_back(0, true);
            } else {
                Hs.emplace_back(positive_int(h, "grid.H"), false);
            }
        }
    }
    for (const auto& gv : gammas) {
        if (gv.is_string()) {
            if (gv.get<std::string>() != "average")
                throw ValidationError("grid.gamma: unknown value '" + gv.get<std::string>() + "'");
            for (int K : Ks) out.push_back({Setting::average, 0.0, 0, true, K});
            continue;
        }
        const double gamma = number_at(gv, "grid.gamma");
        if (Hs.empty()) throw ValidationError("grid.H: required for discounted cells");
        for (auto [H, inf] : Hs) {
            const int h = inf ? (gamma >= 0.0 && gamma < 1.0 ? effective_horizon(gamma) : 0) : H;
            for (int K : Ks) out.push_back({Setting::discounted, gamma, h, inf, K});
        }
    }
}

inline std::uint64_t u64_at(const Json& v, const std::string& path) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
        throw ValidationError(path + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

}  // namespace detail

/// Parses an experiment document (schema in the README).
inline ExperimentConfig experiment_config_from_json(const Json& doc) {
    ExperimentConfig cfg;
    const Json& g = detail::require(doc, "gumdp");
    if (!g.is_string()) throw ValidationError("gumdp: expected a builtin name or file path");
    cfg.gumdp = g.get<std::string>();
    if (auto it = doc.find("state_only"); it != doc.end()) {
        if (!it->is_boolean()) throw ValidationError("state_only: expected a boolean");
        cfg.state_only = it->get<bool>();
    }
    if (auto it = doc.find("noise_eps"); it != doc.end() && !it->is_null())
        cfg.noise_eps = detail::number_at(*it, "noise_eps");
    if (auto it = doc.find("policy"); it != doc.end()) {
        if (it->is_string()) cfg.policy = it->get<std::string>();
        else cfg.policy = detail::matrix_at(*it, "policy");
    }
    const Json& grid = detail::require(doc, "grid");
    if (grid.is_array()) {
        for (const auto& block : grid) detail::expand_grid_block(block, cfg.cells);
    } else {
        detail::expand_grid_block(grid, cfg.cells);
    }
    if (auto it = doc.find("N"); it != doc.end()) cfg.N = static_cast<std::size_t>(detail::positive_int(*it, "N"));
    if (auto it = doc.find("master_seed"); it != doc.end()) cfg.master_seed = detail::u64_at(*it, "master_seed");
    if (auto it = doc.find("seeds"); it != doc.end()) {
        if (!it->is_array()) throw ValidationError("seeds: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            cfg.seeds.push_back(detail::u64_at((*it)[i], "seeds[" + std::to_string(i) + "]"));
        if (doc.find("master_seed") == doc.end() && !cfg.seeds.empty()) cfg.master_seed = cfg.seeds.front();
    } else if (auto n = doc.find("n_seeds"); n != doc.end()) {
        const int count = detail::positive_int(*n, "n_seeds");
        for (int i = 0; i < count; ++i)
            cfg.seeds.push_back(derive_seed({cfg.master_seed, static_cast<std::uint64_t>(i)}));
    }
    if (auto it = doc.find("ci_level"); it != doc.end()) cfg.ci_level = detail::number_at(*it, "ci_level");
    if (auto it = doc.find("bootstrap_resamples"); it != doc.end())
        cfg.bootstrap_resamples = static_cast<std::size_t>(detail::positive_int(*it, "bootstrap_resamples"));
    if (auto it = doc.find("output"); it != doc.end()) {
        if (!it->is_string()) throw ValidationError("output: expected a file path");
        cfg.output = it->get<std::string>();
    }
    if (auto it = doc.find("threads"); it != doc.end())
        cfg.threads = static_cast<unsigned>(detail::positive_int(*it, "threads"));
    if (auto it = doc.find("timestamp"); it != doc.end()) {
        if (!it->is_string()) throw ValidationError("timestamp: expected a string");
        cfg.timestamp = it->get<std::string>();
    }
    cfg.validate();
    return cfg;
}

/// Loads a config; a relative "output" is resolved against the config's directory.
inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    const std::string origin = path.string();
    Json doc = parse_json(read_text_file(path), origin);
    ExperimentConfig cfg;
    try {
        cfg = experiment_config_from_json(doc);
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    if (std::filesystem::path out(cfg.output); out.is_relative())
        cfg.output = (path.parent_path() / out).lexically_normal().string();
    return cfg;
}

// ---------------------------------------------------------------------------
// Running experiments
// ---------------------------------------------------------------------------

struct ExperimentRow {
    GridCell cell;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double std_error = 0.0;
};

struct CellSummary {
    GridCell cell;
    std::size_t n_seeds = 0;
    double mean = 0.0;
    Interval ci{0.0, 0.0};
    double f_infinity = 0.0;
    std::optional<double> exact_fK;
};

struct ExperimentResult {
    std::string gumdp;
    std::optional<double> noise_eps;
    std::size_t N = 0;
    std::uint64_t master_seed = 0;
    std::string timestamp;
    std::vector<ExperimentRow> rows;
    std::vector<CellSummary> cells;
};

namespace detail {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Stream key of a grid cell, independent of grid order and scheduling.
inline std::uint64_t cell_key(const GridCell& c) {
    return derive_seed({static_cast<std::uint64_t>(c.setting), std::bit_cast<std::uint64_t>(c.gamma),
                        static_cast<std::uint64_t>(c.H), static_cast<std::uint64_t>(c.K)});
}

inline EvalSettings cell_settings(const GridCell& c, std::size_t N, std::uint64_t seed) {
    EvalSettings s = c.setting == Setting::average ? EvalSettings::average(c.K, N, seed)
                                                   : EvalSettings::discounted(c.gamma, c.K, c.H, N, seed);
    s.experiment = cell_key(c);
    return s;
}

/// Default timestamp: SOURCE_DATE_EPOCH when set, else the Unix epoch, so
/// that repeated runs stay byte-identical. "now" asks for wall-clock time.
inline std::string resolve_timestamp(const std::string& requested) {
    auto iso = [](std::time_t t) {
        char buf[32];
        std::tm tm{};
        gmtime_r(&t, &tm);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return std::string(buf);
    };
    if (requested == "now") return iso(std::time(nullptr));
    if (!requested.empty()) return requested;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0') return iso(static_cast<std::time_t>(v));
    }
    return iso(0);
}

inline std::string cell_prefix(const std::string& gumdp, const std::optional<double>& eps, const GridCell& c) {
    std::string out = gumdp + ',' + (eps ? format_double(*eps) : std::string()) + ',' +
                      std::string(to_string(c.setting)) + ',';
    if (c.setting == Setting::discounted) out += format_double(c.gamma);
    out += ',';
    if (c.setting == Setting::discounted) out += c.infinite_horizon ? std::string("inf") : std::to_string(c.H);
    out += ',' + std::to_string(c.K);
    return out;
}

}  // namespace detail

inline std::string experiment_csv_header() {
    return "gumdp,noise_eps,setting,gamma,H,K,seed,N,estimate,f_infinity,exact_fK";
}

/// One row per (cell, seed), sorted by (gamma, H, K, seed), after the header
/// and the metadata comment line.
inline std::string experiment_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << experiment_csv_header() << '\n';
    os << "# meta: version=" << kVersion << " master_seed=" << r.master_seed << " timestamp=" << r.timestamp
       << " N=" << r.N << '\n';
    for (const auto& row : r.rows) {
        const auto it = std::find_if(r.cells.begin(), r.cells.end(),
                                     [&](const CellSummary& c) { return c.cell.key() == row.cell.key(); });
        os << detail::cell_prefix(r.gumdp, r.noise_eps, row.cell) << ',' << row.seed << ',' << r.N << ','
           << detail::format_double(row.estimate) << ',';
        if (it != r.cells.end()) {
            os << detail::format_double(it->f_infinity) << ',';
            if (it->exact_fK) os << detail::format_double(*it->exact_fK);
        } else {
            os << ',';
        }
        os << '\n';
    }
    return os.str();
}

inline std::string experiment_summary_csv_header() {
    return "gumdp,noise_eps,setting,gamma,H,K,n_seeds,N,mean,ci_low,ci_high,f_infinity,exact_fK";
}

inline std::string experiment_summary_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << experiment_summary_csv_header() << '\n';
    for (const auto& c : r.cells) {
        os << detail::cell_prefix(r.gumdp, r.noise_eps, c.cell) << ',' << c.n_seeds << ',' << r.N << ','
           << detail::format_double(c.mean) << ',' << detail::format_double(c.ci.low) << ','
           << detail::format_double(c.ci.high) << ',' << detail::format_double(c.f_infinity) << ',';
        if (c.exact_fK) os << detail::format_double(*c.exact_fK);
        os << '\n';
    }
    return os.str();
}

/// Path of the per-cell summary written next to the main CSV.
inline std::filesystem::path summary_path(const std::filesystem::path& output) {
    auto p = output;
    p.replace_filename(output.stem().string() + "_summary" + output.extension().string());
    return p;
}

/// The GUMDP an experiment runs on, after the optional noise perturbation.
inline Gumdp experiment_gumdp(const ExperimentConfig& cfg) {
    Gumdp g = resolve_gumdp(cfg.gumdp, cfg.state_only);
    if (cfg.noise_eps) g = perturb_kernel(g, *cfg.noise_eps);
    return g;
}

inline StationaryPolicy experiment_policy(const Gumdp& g, const ExperimentConfig& cfg) {
    if (const auto* m = std::get_if<Matrix>(&cfg.policy)) {
        StationaryPolicy pi(*m, kLoadTolerance);
        check_policy_shape(g, pi);
        return pi;
    }
    return resolve_policy(g, std::get<std::string>(cfg.policy));
}

/// Runs Algorithm 1 for every (cell, seed) and summarizes each cell across seeds.
/// Rows computed before a failure are kept in `partial` when it is non-null.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, ExperimentResult* partial = nullptr) {
    cfg.validate();
    const Gumdp g = experiment_gumdp(cfg);
    const StationaryPolicy pi = experiment_policy(g, cfg);

    ExperimentResult result;
    result.gumdp = g.name().empty() ? cfg.gumdp : g.name();
    result.noise_eps = cfg.noise_eps;
    result.N = cfg.N;
    result.master_seed = cfg.master_seed;
    result.timestamp = detail::resolve_timestamp(cfg.timestamp);

    // Distinct cells in sort order.
    std::vector<GridCell> cells = cfg.cells;
    std::sort(cells.begin(), cells.end(), [](const GridCell& a, const GridCell& b) { return a.key() < b.key(); });
    cells.erase(std::unique(cells.begin(), cells.end(),
                            [](const GridCell& a, const GridCell& b) { return a.key() == b.key(); }),
                cells.end());
    std::vector<std::uint64_t> seeds = cfg.seeds;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    const std::size_t n_jobs = cells.size() * seeds.size();
    std::vector<ExperimentRow> rows(n_jobs);
    std::vector<char> done(n_jobs, 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= n_jobs) return;
            {
                std::lock_guard lock(failure_mutex);
                if (failure) return;
            }
            const GridCell& c = cells[j / seeds.size()];
            const std::uint64_t seed = seeds[j % seeds.size()];
            try {
                const auto est = estimate_finite_trials(g, pi, detail::cell_settings(c, cfg.N, seed));
                rows[j] = {c, seed, est.value, est.std_error};
                done[j] = 1;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(cfg.threads ? cfg.threads : hw, std::max<std::size_t>(n_jobs, 1)));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t j = 0; j < n_jobs; ++j)
        if (done[j]) result.rows.push_back(rows[j]);
    if (failure) {
        if (partial) *partial = result;
        std::rethrow_exception(failure);
    }

    // Per-cell summaries. f_inf depends only on the setting and gamma.
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const GridCell& c = cells[ci];
        CellSummary s;
        s.cell = c;
        std::vector<double> xs;
        for (std::size_t si = 0; si < seeds.size(); ++si) xs.push_back(rows[ci * seeds.size() + si].estimate);
        s.n_seeds = xs.size();
        double sum = 0.0;
        for (double x : xs) sum += x;
        s.mean = sum / static_cast<double>(xs.size());
        if (xs.size() >= 2) {
            RandomStream rs(derive_seed({cfg.master_seed, detail::cell_key(c), 0xB0075u}));
            s.ci = bootstrap_ci(xs, cfg.ci_level, cfg.bootstrap_resamples, rs);
        } else {
            s.ci = {s.mean, s.mean};
        }
        const EvalSettings es = detail::cell_settings(c, cfg.N, 0);
        s.f_infinity = infinite_trials_value(g, pi, es);
        if (g.objective().is_linear()) {
            s.exact_fK = s.f_infinity;
        } else if (c.setting == Setting::average) {
            const auto law = limit_occupancy_law(g, pi);
            if (multinomial_support_size(c.K, law.atoms.size()) <= kMultinomialSupportCap)
                s.exact_fK = expected_objective_over_law(g.objective(), law, c.K);
        }
        result.cells.push_back(std::move(s));
    }
    if (partial) *partial = result;
    return result;
}

/// Writes the main CSV and the summary CSV. Partial results are flushed
/// before an evaluation error propagates.
inline ExperimentResult run_experiment_to_files(const ExperimentConfig& cfg) {
    ExperimentResult partial;
    try {
        ExperimentResult result = run_experiment(cfg, &partial);
        write_text_file(cfg.output, experiment_csv(result));
        write_text_file(summary_path(cfg.output), experiment_summary_csv(result));
        return result;
    } catch (const IoError&) {
        throw;
    } catch (...) {
        if (!partial.rows.empty()) write_text_file(cfg.output, experiment_csv(partial));
        throw;
    }
}

// ---------------------------------------------------------------------------
// Equivalence matrix
// ---------------------------------------------------------------------------

enum class ChainStructure { unichain, multichain };

struct Table1Cell {
    bool linear_objective;
    Setting setting;
    /// Only meaningful in the average setting.
    std::optional<ChainStructure> structure;
    bool equivalent;
    /// True for the cell that (g, pi) belongs to, per setting.
    bool applies = false;
    std::optional<double> exact_gap;
    std::optional<MonteCarloEstimate> monte_carlo_gap;
};

struct Table1Options {
    double gamma = 0.9;
    int K = 1;
    std::size_t N = 10000;
    std::uint64_t seed = 0;
};

struct Table1Report {
    bool linear_objective = false;
    bool unichain = false;
    std::vector<Table1Cell> cells;
};

/// Classifies (objective linearity x setting x chain structure) and attaches
/// evidence for the cells that apply to (g, pi): an exact gap in the average
/// setting, a Monte Carlo gap f_K - f_inf in the discounted one.
inline Table1Report table1_matrix(const Gumdp& g, const StationaryPolicy& pi, const Table1Options& opt = {}) {
    check_policy_shape(g, pi);
    Table1Report report;
    report.linear_objective = g.objective().is_linear();
    report.unichain = is_unichain(g);
    const auto structure = report.unichain ? ChainStructure::unichain : ChainStructure::multichain;

    for (bool linear : {true, false}) {
        report.cells.push_back({linear, Setting::discounted, std::nullopt, linear, false, std::nullopt, std::nullopt});
        report.cells.push_back({linear, Setting::average, ChainStructure::unichain, true, false, std::nullopt, std::nullopt});
        report.cells.push_back({linear, Setting::average, ChainStructure::multichain, linear, false, std::nullopt, std::nullopt});
    }
    for (auto& cell : report.cells) {
        if (cell.linear_objective != report.linear_objective) continue;
        if (cell.setting == Setting::discounted) {
            cell.applies = true;
            EvalSettings s = EvalSettings::discounted(opt.gamma, opt.K, effective_horizon(opt.gamma), opt.N, opt.seed);
            auto est = estimate_finite_trials(g, pi, s);
            est.value -= infinite_trials_value(g, pi, s);
            cell.monte_carlo_gap = est;
        } else if (cell.structure == structure) {
            cell.applies = true;
            const EvalSettings s = EvalSettings::average(opt.K, opt.N, opt.seed);
            cell.exact_gap = finite_trials_value_exact_average(g, pi, opt.K) - infinite_trials_value(g, pi, s);
        }
    }
    return report;
}

inline std::string format_table1(const Table1Report& r) {
    std::ostringstream os;
    os.precision(10);
    os << "objective: " << (r.linear_objective ? "linear" : "non-linear")
       << "\nstructure: " << (r.unichain ? "unichain" : "multichain") << '\n';
    for (const auto& c : r.cells) {
        os << (c.applies ? "* " : "  ") << (c.linear_objective ? "linear     " : "non-linear ")
           << (c.setting == Setting::discounted ? "discounted          "
                                                : (c.structure == ChainStructure::unichain ? "average/unichain    "
                                                                                           : "average/multichain  "))
           << (c.equivalent ? "equivalent" : "not equivalent");
        if (c.exact_gap) os << "  exact gap " << *c.exact_gap;
        if (c.monte_carlo_gap)
            os << "  monte carlo gap " << c.monte_carlo_gap->value << " (se " << c.monte_carlo_gap->std_error << ")";
        os << '\n';
    }
    return os.str();
}

}  // namespace gumdp
