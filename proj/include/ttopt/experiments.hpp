#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ttopt/dense.hpp"
#include "ttopt/optima.hpp"
#include "ttopt/tt_tensor.hpp"

namespace ttopt::experiments {

/// Invalid experiment configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Format { csv, json };

struct ExperimentConfig {
    /// random-small | func-small | func-big | kdep-hist
    std::string experiment;
    std::vector<std::size_t> dims;
    /// Mode-size range; a single N is n_min == n_max.
    std::size_t n_min = 0;
    std::size_t n_max = 0;
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> beam_widths;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    bool bidirectional = false;
    /// Square the shifted tensor in the second search of optima_tt.
    bool square_shift = false;
    /// Join the first j modes before searching; 0 or 1 disables.
    std::size_t join_j = 0;
    /// Benchmark subset for func-small / func-big (empty: the full set).
    std::vector<std::string> functions;
    /// Relative tolerance of the TT-SVD build in func-small.
    double svd_tolerance = 1e-10;
    std::size_t element_budget = kDefaultElementBudget;
    std::filesystem::path out;
    Format format = Format::csv;
};

/// Defaults reproducing the published setup of each experiment:
///   random-small  d in {4,5,6}, N in 5..20, r in {1..5}, K=100, 100 reps
///   func-small    d=6, N=16, K=100, all ten benchmarks
///   func-big      d=100, N=1024, K=100, the five explicit-core benchmarks
///   kdep-hist     d=6, N=16, r=3, K in {1,10,25}, 1000 reps
/// Throws ConfigError for an unknown experiment name.
ExperimentConfig default_config(std::string_view experiment);

/// Throws ConfigError describing the first invalid field.
void validate(const ExperimentConfig& cfg);

/// Seed of trial `trial` in stream `stream`, mixed from the master seed with
/// std::seed_seq. Independent of the order trials are run in.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t trial);

/// optima_tt with the given options after joining the first join_j modes;
/// indices are reported in the original (unjoined) layout.
OptimaResult optimize(const TTTensor& t, const OptimaOptions& options, std::size_t join_j);

struct RandomSmallRow {
    std::size_t d = 0;
    std::size_t rank = 0;
    std::size_t reps = 0;
    std::size_t k = 0;
    double e_min = 0.0;  // max over reps of |y_min - y_min^real|
    double e_max = 0.0;
};

struct FuncSmallRow {
    std::string function;
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    double avg_rank = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    double y_min_real = 0.0;
    double y_max_real = 0.0;
    double e_min = 0.0;
    double e_max = 0.0;
};

struct FuncBigRow {
    std::string function;
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    double avg_rank = 0.0;
    double y_min = 0.0;
    /// Tensor value at the grid node nearest the known minimizer.
    double y_min_tens = 0.0;
    /// Reference for e_min: the exact grid minimum for separable functions,
    /// y_min_tens otherwise.
    double y_min_grid = 0.0;
    double e_min = 0.0;
    double time_s = 0.0;  // optimizer wall time only
};

struct KdepTrial {
    std::size_t k = 0;
    std::size_t trial = 0;
    /// |true max modulus / found modulus| (>= 1).
    double ratio = 0.0;
};

struct KdepBin {
    std::size_t k = 0;
    double lower = 0.0;
    double upper = 0.0;  // +inf for the last bin
    std::size_t count = 0;
};

struct KdepResult {
    std::vector<KdepTrial> trials;
    std::vector<KdepBin> histogram;
};

/// Histogram bin edges for kdep-hist ratios; the last bin is open-ended.
const std::vector<double>& kdep_bin_edges();

std::vector<RandomSmallRow> run_random_small(const ExperimentConfig& cfg);
std::vector<FuncSmallRow> run_func_small(const ExperimentConfig& cfg);
std::vector<FuncBigRow> run_func_big(const ExperimentConfig& cfg);
KdepResult run_kdep_hist(const ExperimentConfig& cfg);

using Cell = std::variant<std::int64_t, double, std::string>;

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

ResultTable to_table(const std::vector<RandomSmallRow>& rows);
ResultTable to_table(const std::vector<FuncSmallRow>& rows);
ResultTable to_table(const std::vector<FuncBigRow>& rows);
std::vector<ResultTable> to_tables(const KdepResult& result);

/// Runs the configured experiment and returns its tables (one, or trials +
/// histogram for kdep-hist).
std::vector<ResultTable> run_experiment(const ExperimentConfig& cfg);

/// CSV text of one table: header line, then one line per row; doubles use
/// the shortest round-trip representation.
std::string format_csv(const ResultTable& table);

/// JSON document {"experiment", "config", "tables": [...]} as described by
/// schemas/experiment_output.schema.json.
std::string format_json(const ExperimentConfig& cfg, const std::vector<ResultTable>& tables);

/// Writes results to cfg.out. CSV: the first table to cfg.out, further
/// tables to "<stem>.<table>.csv" beside it. JSON: a single document.
void write_results(const ExperimentConfig& cfg, const std::vector<ResultTable>& tables);

}  // namespace ttopt::experiments
