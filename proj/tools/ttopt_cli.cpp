// Experiment runner. Exit codes: 0 success, 2 configuration error,
// 3 resource budget exceeded, 1 anything else.
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttopt/errors.hpp"
#include "ttopt/experiments.hpp"

namespace ex = ttopt::experiments;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

std::size_t parse_size(const std::string& s, const std::string& flag) {
    std::size_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ex::ConfigError(flag + ": '" + s + "' is not a non-negative integer");
    return v;
}

// "4,5,6" or a single value.
std::vector<std::size_t> parse_list(const std::string& s, const std::string& flag) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_size(item, flag));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor-train optimization experiments"};
    std::string experiment, dims, n_range, ranks, ks, functions, format = "csv", out;
    std::size_t reps = 0, join_j = 0;
    std::uint64_t seed = 0;
    bool bidir = false;
    bool square_shift = false;
    app.add_option("--experiment", experiment, "random-small | func-small | func-big | kdep-hist")->required();
    app.add_option("--d", dims, "dimension(s), comma separated");
    app.add_option("--n", n_range, "mode size N, or range LO:HI");
    app.add_option("--rank", ranks, "TT-rank(s), comma separated");
    app.add_option("--k", ks, "beam width(s), comma separated");
    app.add_option("--reps", reps, "repetitions per cell");
    app.add_option("--seed", seed, "master seed");
    app.add_flag("--bidir", bidir, "search from both ends of the train");
    app.add_flag("--square-shift", square_shift,
                 "square t - y before the second search (rank (R+1)^2)");
    app.add_option("--join-j", join_j, "join the first j modes before searching");
    app.add_option("--functions", functions, "benchmark subset, comma separated");
    app.add_option("--out", out, "output path")->required();
    app.add_option("--format", format, "csv | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        ex::ExperimentConfig cfg = ex::default_config(experiment);
        if (!dims.empty()) cfg.dims = parse_list(dims, "--d");
        if (!n_range.empty()) {
            const auto colon = n_range.find(':');
            if (colon == std::string::npos) {
                cfg.n_min = cfg.n_max = parse_size(n_range, "--n");
            } else {
                cfg.n_min = parse_size(n_range.substr(0, colon), "--n");
                cfg.n_max = parse_size(n_range.substr(colon + 1), "--n");
            }
        }
        if (!ranks.empty()) cfg.ranks = parse_list(ranks, "--rank");
        if (!ks.empty()) cfg.beam_widths = parse_list(ks, "--k");
        if (app.count("--reps")) cfg.reps = reps;
        if (app.count("--seed")) cfg.seed = seed;
        cfg.bidirectional = bidir;
        cfg.square_shift = square_shift;
        cfg.join_j = join_j;
        if (!functions.empty()) {
            std::size_t start = 0;
            while (true) {
                const auto comma = functions.find(',', start);
                cfg.functions.push_back(functions.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }
        if (format == "csv") cfg.format = ex::Format::csv;
        else if (format == "json") cfg.format = ex::Format::json;
        else throw ex::ConfigError("--format: expected csv or json, got '" + format + "'");
        cfg.out = out;

        ex::validate(cfg);
        ex::write_results(cfg, ex::run_experiment(cfg));
    } catch (const ex::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ttopt::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
