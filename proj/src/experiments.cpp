#include "ttopt/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "ttopt/benchmarks.hpp"
#include "ttopt/oracle.hpp"
#include "ttopt/tt_svd.hpp"

namespace ttopt::experiments {

namespace {

constexpr std::string_view kExperiments[] = {"random-small", "func-small", "func-big", "kdep-hist"};

std::vector<std::string> function_list(const ExperimentConfig& cfg, bool explicit_only) {
    if (!cfg.functions.empty()) return cfg.functions;
    std::vector<std::string> names;
    for (const auto& b : bench::all_benchmarks())
        if (!explicit_only || b.explicit_tt) names.push_back(b.name);
    return names;
}

std::size_t first_or(const std::vector<std::size_t>& v, std::size_t fallback) {
    return v.empty() ? fallback : v.front();
}

}  // namespace

ExperimentConfig default_config(std::string_view experiment) {
    ExperimentConfig cfg;
    cfg.experiment = std::string(experiment);
    cfg.beam_widths = {kDefaultBeamWidth};
    cfg.seed = 42;
    if (experiment == "random-small") {
        cfg.dims = {4, 5, 6};
        cfg.n_min = 5;
        cfg.n_max = 20;
        cfg.ranks = {1, 2, 3, 4, 5};
        cfg.reps = 100;
    } else if (experiment == "func-small") {
        cfg.dims = {6};
        cfg.n_min = cfg.n_max = 16;
        cfg.reps = 1;
    } else if (experiment == "func-big") {
        cfg.dims = {100};
        cfg.n_min = cfg.n_max = 1024;
        cfg.reps = 1;
    } else if (experiment == "kdep-hist") {
        cfg.dims = {6};
        cfg.n_min = cfg.n_max = 16;
        cfg.ranks = {3};
        cfg.beam_widths = {1, 10, 25};
        cfg.reps = 1000;
    } else {
        throw ConfigError("unknown experiment '" + std::string(experiment) +
                          "' (expected random-small, func-small, func-big or kdep-hist)");
    }
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    if (std::find(std::begin(kExperiments), std::end(kExperiments), cfg.experiment) == std::end(kExperiments))
        throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    if (cfg.dims.empty()) throw ConfigError("--d: at least one dimension is required");
    for (auto d : cfg.dims)
        if (d == 0) throw ConfigError("--d: dimensions must be positive");
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw ConfigError("--n: need 1 <= N_min <= N_max");
    if ((cfg.experiment == "func-small" || cfg.experiment == "func-big") && cfg.n_min < 2)
        throw ConfigError("--n: Chebyshev grids need at least 2 nodes");
    if (cfg.beam_widths.empty()) throw ConfigError("--k: at least one beam width is required");
    for (auto k : cfg.beam_widths)
        if (k == 0) throw ConfigError("--k: beam widths must be positive");
    if (cfg.experiment == "random-small" || cfg.experiment == "kdep-hist") {
        if (cfg.ranks.empty()) throw ConfigError("--rank: at least one rank is required");
        for (auto r : cfg.ranks)
            if (r == 0) throw ConfigError("--rank: ranks must be positive");
        if (cfg.reps == 0) throw ConfigError("--reps: must be positive");
    }
    for (auto d : cfg.dims)
        if (cfg.join_j > 1 && cfg.join_j >= d) throw ConfigError("--join-j: need j < d");
    for (const auto& f : cfg.functions) {
        try {
            const auto& b = bench::benchmark_by_name(f);
            if (cfg.experiment == "func-big" && !b.explicit_tt)
                throw ConfigError("function " + b.name + " has no explicit TT-cores");
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what());
        }
    }
    if (!(cfg.svd_tolerance >= 0.0)) throw ConfigError("TT-SVD tolerance must be non-negative");
}

namespace {
OptimaOptions options_for(const ExperimentConfig& cfg, std::size_t k) {
    return {.beam_width = k, .bidirectional = cfg.bidirectional, .square_shift = cfg.square_shift};
}
}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

OptimaResult optimize(const TTTensor& t, const OptimaOptions& options, std::size_t join_j) {
    if (join_j <= 1) return optima_tt(t, options);
    const Shape shape = t.shape();
    OptimaResult res = optima_tt(join_first_indices(t, join_j), options);
    res.i_min = split_joined_index(res.i_min, shape, join_j);
    res.i_max = split_joined_index(res.i_max, shape, join_j);
    return res;
}

std::vector<RandomSmallRow> run_random_small(const ExperimentConfig& cfg) {
    validate(cfg);
    const std::size_t k = first_or(cfg.beam_widths, kDefaultBeamWidth);
    std::vector<RandomSmallRow> rows;
    for (auto d : cfg.dims) {
        for (auto r : cfg.ranks) {
            RandomSmallRow row{d, r, cfg.reps, k, 0.0, 0.0};
            const std::uint64_t stream = d * 1000 + r;
            for (std::size_t trial = 0; trial < cfg.reps; ++trial) {
                std::mt19937_64 gen(trial_seed(cfg.seed, stream, trial));
                std::uniform_int_distribution<std::size_t> size_dist(cfg.n_min, cfg.n_max);
                Shape shape(d);
                for (auto& n : shape) n = size_dist(gen);
                const std::vector<std::size_t> ranks(d - 1, r);
                const TTTensor t = tt_random(shape, ranks, gen());
                const OptimaResult res = optimize(t, options_for(cfg, k), cfg.join_j);
                const auto exact = oracle::brute_min_max(to_full(t, cfg.element_budget));
                row.e_min = std::max(row.e_min, std::abs(res.y_min - exact.y_min));
                row.e_max = std::max(row.e_max, std::abs(res.y_max - exact.y_max));
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<FuncSmallRow> run_func_small(const ExperimentConfig& cfg) {
    validate(cfg);
    const std::size_t k = first_or(cfg.beam_widths, kDefaultBeamWidth);
    std::vector<FuncSmallRow> rows;
    for (auto d : cfg.dims) {
        for (const auto& name : function_list(cfg, false)) {
            const auto& b = bench::benchmark_by_name(name);
            const auto grid = b.grid(d, cfg.n_min);
            const TTTensor t = tt_svd(bench::discretize_full(b, grid, cfg.element_budget), cfg.svd_tolerance);
            const OptimaResult res = optimize(t, options_for(cfg, k), cfg.join_j);
            const auto exact = oracle::brute_min_max(to_full(t, cfg.element_budget));
            rows.push_back({b.name, d, cfg.n_min, k, t.average_rank(), res.y_min, res.y_max, exact.y_min,
                            exact.y_max, std::abs(res.y_min - exact.y_min),
                            std::abs(res.y_max - exact.y_max)});
        }
    }
    return rows;
}

std::vector<FuncBigRow> run_func_big(const ExperimentConfig& cfg) {
    validate(cfg);
    const std::size_t k = first_or(cfg.beam_widths, kDefaultBeamWidth);
    std::vector<FuncBigRow> rows;
    for (auto d : cfg.dims) {
        for (const auto& name : function_list(cfg, true)) {
            const auto& b = bench::benchmark_by_name(name);
            const auto grid = b.grid(d, cfg.n_min);
            const TTTensor t = bench::explicit_cores(b.name, grid);
            const auto start = std::chrono::steady_clock::now();
            const OptimaResult res = optimize(t, options_for(cfg, k), cfg.join_j);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            const auto i_tens = bench::nearest_grid_index(grid, b.argmin(d));
            const double y_tens = eval(t, i_tens);
            const double y_grid = bench::separable_grid_min(b, grid).value_or(y_tens);
            rows.push_back({b.name, d, cfg.n_min, k, t.average_rank(), res.y_min, y_tens, y_grid,
                            std::abs(res.y_min - y_grid), elapsed.count()});
        }
    }
    return rows;
}

const std::vector<double>& kdep_bin_edges() {
    static const std::vector<double> edges{1.0, 1.001, 1.01, 1.05, 1.1, 1.25, 1.5, 2.0, 3.0};
    return edges;
}

KdepResult run_kdep_hist(const ExperimentConfig& cfg) {
    validate(cfg);
    const std::size_t d = cfg.dims.front();
    const std::size_t r = cfg.ranks.front();
    KdepResult out;
    const auto& edges = kdep_bin_edges();
    std::vector<std::vector<std::size_t>> counts(cfg.beam_widths.size(),
                                                 std::vector<std::size_t>(edges.size(), 0));
    for (std::size_t trial = 0; trial < cfg.reps; ++trial) {
        std::mt19937_64 gen(trial_seed(cfg.seed, 0, trial));
        std::uniform_int_distribution<std::size_t> size_dist(cfg.n_min, cfg.n_max);
        Shape shape(d);
        for (auto& n : shape) n = size_dist(gen);
        const TTTensor t = tt_random(shape, std::vector<std::size_t>(d - 1, r), gen());
        const double true_max = max_abs_scan(t, cfg.element_budget);
        for (std::size_t ki = 0; ki < cfg.beam_widths.size(); ++ki) {
            const std::size_t k = cfg.beam_widths[ki];
            MultiIndex idx;
            if (cfg.join_j > 1) {
                const auto joined = join_first_indices(t, cfg.join_j, cfg.element_budget);
                idx = cfg.bidirectional ? optima_tt_max_bidir(joined, k) : optima_tt_max(joined, k).index;
                idx = split_joined_index(idx, shape, cfg.join_j);
            } else {
                idx = cfg.bidirectional ? optima_tt_max_bidir(t, k) : optima_tt_max(t, k).index;
            }
            const double ratio = true_max / std::abs(eval(t, idx));
            out.trials.push_back({k, trial, ratio});
            const auto bin = static_cast<std::size_t>(
                std::upper_bound(edges.begin(), edges.end(), ratio) - edges.begin());
            ++counts[ki][bin == 0 ? 0 : bin - 1];
        }
    }
    for (std::size_t ki = 0; ki < cfg.beam_widths.size(); ++ki)
        for (std::size_t b = 0; b < edges.size(); ++b)
            out.histogram.push_back({cfg.beam_widths[ki], edges[b],
                                     b + 1 < edges.size() ? edges[b + 1]
                                                          : std::numeric_limits<double>::infinity(),
                                     counts[ki][b]});
    return out;
}

namespace {

Cell count(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

ResultTable to_table(const std::vector<RandomSmallRow>& rows) {
    ResultTable t{"results", {"d", "rank", "reps", "k", "e_min", "e_max"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({count(r.d), count(r.rank), count(r.reps), count(r.k), r.e_min, r.e_max});
    return t;
}

ResultTable to_table(const std::vector<FuncSmallRow>& rows) {
    ResultTable t{"results",
                  {"function", "d", "n", "k", "avg_rank", "y_min", "y_max", "y_min_real", "y_max_real",
                   "e_min", "e_max"},
                  {}};
    for (const auto& r : rows)
        t.rows.push_back({r.function, count(r.d), count(r.n), count(r.k), r.avg_rank, r.y_min, r.y_max,
                          r.y_min_real, r.y_max_real, r.e_min, r.e_max});
    return t;
}

ResultTable to_table(const std::vector<FuncBigRow>& rows) {
    ResultTable t{"results",
                  {"function", "d", "n", "k", "avg_rank", "y_min", "y_min_tens", "y_min_grid", "e_min",
                   "time_s"},
                  {}};
    for (const auto& r : rows)
        t.rows.push_back({r.function, count(r.d), count(r.n), count(r.k), r.avg_rank, r.y_min,
                          r.y_min_tens, r.y_min_grid, r.e_min, r.time_s});
    return t;
}

std::vector<ResultTable> to_tables(const KdepResult& result) {
    ResultTable trials{"trials", {"k", "trial", "ratio"}, {}};
    for (const auto& t : result.trials) trials.rows.push_back({count(t.k), count(t.trial), t.ratio});
    ResultTable hist{"hist", {"k", "bin_lo", "bin_hi", "count"}, {}};
    for (const auto& b : result.histogram)
        hist.rows.push_back({count(b.k), b.lower, b.upper, count(b.count)});
    return {std::move(trials), std::move(hist)};
}

std::vector<ResultTable> run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    if (cfg.experiment == "random-small") return {to_table(run_random_small(cfg))};
    if (cfg.experiment == "func-small") return {to_table(run_func_small(cfg))};
    if (cfg.experiment == "func-big") return {to_table(run_func_big(cfg))};
    return to_tables(run_kdep_hist(cfg));
}

namespace {

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) return v;
            else if constexpr (std::is_same_v<T, double>) {
                if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
                return fmt::format("{}", v);
            } else return fmt::format("{}", v);
        },
        c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (std::isinf(v)) return nullptr;  // open-ended histogram bin
                return v;
            } else return v;
        },
        c);
}

}  // namespace

std::string format_csv(const ResultTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string format_json(const ExperimentConfig& cfg, const std::vector<ResultTable>& tables) {
    nlohmann::ordered_json doc;
    doc["experiment"] = cfg.experiment;
    nlohmann::ordered_json c;
    c["d"] = cfg.dims;
    c["n_min"] = cfg.n_min;
    c["n_max"] = cfg.n_max;
    c["rank"] = cfg.ranks;
    c["k"] = cfg.beam_widths;
    c["reps"] = cfg.reps;
    c["seed"] = cfg.seed;
    c["bidir"] = cfg.bidirectional;
    c["square_shift"] = cfg.square_shift;
    c["join_j"] = cfg.join_j;
    c["functions"] = cfg.functions;
    doc["config"] = std::move(c);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : tables) {
        nlohmann::ordered_json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            auto jr = nlohmann::ordered_json::array();
            for (const auto& cell : row) jr.push_back(json_cell(cell));
            rows.push_back(std::move(jr));
        }
        jt["rows"] = std::move(rows);
        arr.push_back(std::move(jt));
    }
    doc["tables"] = std::move(arr);
    return doc.dump(2) + "\n";
}

void write_results(const ExperimentConfig& cfg, const std::vector<ResultTable>& tables) {
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
        out << text;
    };
    if (cfg.format == Format::json) {
        write(cfg.out, format_json(cfg, tables));
        return;
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
        std::filesystem::path p = cfg.out;
        if (i > 0) p.replace_filename(cfg.out.stem().string() + "." + tables[i].name + ".csv");
        write(p, format_csv(tables[i]));
    }
}

}  // namespace ttopt::experiments
