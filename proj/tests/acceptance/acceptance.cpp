// Acceptance checks, one line per criterion. Run all of them, or pick one
// with --criterion N. Exit status is non-zero if any selected check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ttopt/benchmarks.hpp"
#include "ttopt/experiments.hpp"
#include "ttopt/optima.hpp"
#include "ttopt/oracle.hpp"
#include "ttopt/probability.hpp"
#include "ttopt/serialize.hpp"
#include "ttopt/tt_tensor.hpp"

using namespace ttopt;
namespace ex = ttopt::experiments;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Shape random_shape(std::mt19937_64& gen, std::size_t d, std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> dist(lo, hi);
    Shape s(d);
    for (auto& n : s) n = dist(gen);
    return s;
}

TTTensor random_tt(const Shape& shape, std::size_t rank, std::uint64_t seed) {
    return tt_random(shape, std::vector<std::size_t>(shape.size() - 1, rank), seed);
}

// Random tensor with at most `max_elements` elements: d in 2..5, sizes
// shrunk until the product fits.
TTTensor random_small(std::mt19937_64& gen, std::size_t max_elements, std::size_t max_rank) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 5)(gen);
    Shape shape = random_shape(gen, d, 2, 12);
    auto total = [&] { return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>()); };
    while (total() > max_elements) {
        auto it = std::max_element(shape.begin(), shape.end());
        *it = std::max<std::size_t>(2, *it / 2);
    }
    const std::size_t r = std::uniform_int_distribution<std::size_t>(1, max_rank)(gen);
    return random_tt(shape, r, gen());
}

double max_abs(const DenseArray& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

// Published figures the reproduction is compared with.
const std::map<std::string, double> kPublishedSmallRanks{
    {"Ackley", 11.6},   {"Alpine", 3.0},       {"Dixon", 5.4}, {"Exponential", 4.8},
    {"Grienwank", 11.3}, {"Michalewicz", 3.5}, {"Qing", 4.4},  {"Rastrigin", 4.1},
    {"Schaffer", 12.0}, {"Schwefel", 2.8}};
const std::map<std::string, std::size_t> kPublishedBigRanks{
    {"Exponential", 1}, {"Grienwank", 3}, {"Qing", 2}, {"Rastrigin", 2}, {"Schwefel", 2}};

Outcome random_tensors() {
    auto cfg = ex::default_config("random-small");
    cfg.bidirectional = true;
    cfg.square_shift = true;
    const auto start = Clock::now();
    const auto rows = ex::run_random_small(cfg);
    const double elapsed = seconds_since(start);
    double worst = 0.0, worst_rank1 = 0.0;
    for (const auto& r : rows) {
        const double e = std::max(r.e_min, r.e_max);
        worst = std::max(worst, e);
        if (r.rank == 1) worst_rank1 = std::max(worst_rank1, e);
    }
    const bool pass = rows.size() == 15 && worst <= 1e-10 && worst_rank1 <= 1e-12 && elapsed <= 300.0;
    return {pass, fmt::format("15 cells x 100 trials, K=100, both passes + squared shift: max error {:.3g} "
                              "(<= 1e-10), rank-1 max {:.3g} (<= 1e-12), {:.1f} s (<= 300 s)",
                              worst, worst_rank1, elapsed)};
}

Outcome small_functions() {
    auto cfg = ex::default_config("func-small");
    cfg.bidirectional = true;
    cfg.square_shift = true;
    cfg.join_j = 3;
    const auto rows = ex::run_func_small(cfg);
    bool pass = rows.size() == 10;
    std::string errors, ranks;
    std::vector<std::string> off_rank;
    for (const auto& r : rows) {
        const double tol = r.function == "Qing" ? 1e-2 : 1e-6;
        const double e = std::max(r.e_min, r.e_max);
        pass = pass && e <= tol;
        errors += fmt::format(" {}={:.2g}", r.function, e);
        const double published = kPublishedSmallRanks.at(r.function);
        ranks += fmt::format(" {}={:.1f}/{:.1f}", r.function, r.avg_rank, published);
        if (std::abs(r.avg_rank - published) > 3.0) off_rank.push_back(r.function);
    }
    std::string detail = fmt::format("d=6 N=16 K=100, join j=3, both passes + squared shift; errors{}", errors);
    detail += fmt::format("\n[DIAG] criterion 2 TT-SVD average ranks (ours/published):{}", ranks);
    if (!off_rank.empty()) {
        detail += "\n[DIAG] criterion 2 ranks beyond +-3 of the published TT-cross ranks:";
        for (const auto& f : off_rank) detail += " " + f;
        detail += " (exact ranks of the discretized functions are lower than the published ones)";
    }
    return {pass, detail};
}

Outcome big_functions() {
    auto cfg = ex::default_config("func-big");
    cfg.bidirectional = true;
    cfg.square_shift = true;
    const auto rows = ex::run_func_big(cfg);
    bool pass = rows.size() == 5;
    std::string detail = "d=100 N=1024 K=100, both passes + squared shift;";
    for (const auto& r : rows) {
        const bool rank_ok = r.avg_rank == static_cast<double>(kPublishedBigRanks.at(r.function));
        pass = pass && rank_ok && r.e_min <= 1e-9 && r.time_s <= 60.0;
        detail += fmt::format(" {}: rank {:g}, e_min {:.2g}, {:.2f} s;", r.function, r.avg_rank, r.e_min, r.time_s);
    }
    return {pass, detail};
}

Outcome beam_width_histogram() {
    auto cfg = ex::default_config("kdep-hist");
    cfg.bidirectional = true;
    const auto res = ex::run_kdep_hist(cfg);
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> success;  // k -> (hits, trials)
    for (const auto& t : res.trials) {
        auto& s = success[t.k];
        s.first += t.ratio <= 1.001 ? 1 : 0;
        s.second += 1;
    }
    std::vector<double> frac;
    std::string detail = fmt::format("{} trials, d=6 N=16 R=3, both passes; success (ratio <= 1.001):", cfg.reps);
    for (auto k : cfg.beam_widths) {
        const auto [hits, n] = success[k];
        frac.push_back(static_cast<double>(hits) / static_cast<double>(n));
        detail += fmt::format(" K={} {:.1f}%", k, 100.0 * frac.back());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < frac.size(); ++i) monotone = monotone && frac[i] >= frac[i - 1] - 0.02;
    const bool pass = cfg.reps >= 1000 && monotone && frac.back() >= 0.99;
    return {pass, detail + (monotone ? ", non-decreasing" : ", NOT non-decreasing")};
}

Outcome prefix_marginals() {
    std::mt19937_64 gen(501);
    double worst = 0.0;
    std::size_t prefixes = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const TTTensor t = tt_orth(random_small(gen, 10000, 4), RankPolicy::reduce);
        const auto full = to_full(t);
        const auto shape = t.shape();
        for (std::size_t l = 0; l < t.dim(); ++l) {
            std::size_t count = 1;
            for (std::size_t i = 0; i < l; ++i) count *= shape[i];
            for (std::size_t f = 0; f < count; ++f) {
                std::vector<std::size_t> idx(l);
                std::size_t rest = f;
                for (std::size_t i = l; i-- > 0;) {
                    idx[i] = rest % shape[i];
                    rest /= shape[i];
                }
                const MultiIndex prefix(idx);
                const auto mass = oracle::brute_marginal_mass(full, prefix);
                const double c = std::accumulate(mass.begin(), mass.end(), 0.0);
                if (c == 0.0) continue;
                const auto table = prefix_marginal(t, prefix);
                for (std::size_t n = 0; n < mass.size(); ++n)
                    worst = std::max(worst, std::abs(table.probs[n] - mass[n] / c));
                ++prefixes;
            }
        }
    }
    return {worst <= 1e-10,
            fmt::format("50 tensors (<= 1e4 elements), {} prefixes: max |p - p_brute| {:.3g} (<= 1e-10)", prefixes, worst)};
}

Outcome beam_marginals() {
    std::mt19937_64 gen(602);
    double worst_rel = 0.0, worst_abs = 0.0;
    std::size_t rows = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const TTTensor t = random_small(gen, 5000, 3);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 8)(gen);
        const auto rep = beam_marginal_check(t, k);
        worst_rel = std::max(worst_rel, rep.max_rel_discrepancy);
        worst_abs = std::max(worst_abs, rep.max_abs_discrepancy);
        rows += rep.rows_checked;
    }
    return {worst_rel <= 1e-10,
            fmt::format("50 tensors, {} beam rows: max discrepancy {:.3g} relative to total mass (<= 1e-10), "
                        "{:.3g} absolute",
                        rows, worst_rel, worst_abs)};
}

Outcome worst_case_bounds() {
    std::mt19937_64 gen(703);
    std::size_t checks = 0, violations = 0;
    double tightest = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 200; ++trial) {
        const TTTensor t = random_small(gen, 20000, 4);
        const auto shape = t.shape();
        const double best = max_abs(to_full(t));
        for (std::size_t k : {std::size_t{1}, std::size_t{2}, shape[0], shape[0] * shape[1]}) {
            // j: the largest index with N_1 ... N_{j-1} <= K.
            std::size_t j = 1;
            std::size_t prod = 1;
            while (j < shape.size() && prod * shape[j - 1] <= k) prod *= shape[j++ - 1];
            double factor = 1.0;
            for (std::size_t i = j; i < shape.size(); ++i) factor /= static_cast<double>(shape[i]);
            const double found = eval(t, optima_tt_max(t, k).index);
            const double lhs = found * found, rhs = factor * best * best;
            ++checks;
            if (lhs < rhs * (1.0 - 1e-9)) ++violations;
            if (rhs > 0) tightest = std::min(tightest, lhs / rhs);
        }
    }
    return {violations == 0,
            fmt::format("200 tensors x K in {{1, 2, N1, N1*N2}}: {} checks, {} violations, min found/bound {:.3g}",
                        checks, violations, tightest)};
}

Outcome no_pruning() {
    std::mt19937_64 gen(804);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const TTTensor t = random_small(gen, 100000, 5);
        const auto full = to_full(t);
        const auto top = oracle::brute_top_abs(full, 1).front();
        const auto found = optima_tt_max(t, full.size()).index;
        if (std::abs(std::abs(eval(t, found)) - std::abs(top.value)) > 1e-12 * std::abs(top.value)) ++mismatches;
    }
    return {mismatches == 0, fmt::format("100 tensors (<= 1e5 elements), K = element count: {} mismatches", mismatches)};
}

double median_time(const Shape& shape, std::size_t rank, std::size_t k, std::uint64_t seed) {
    std::vector<double> times;
    for (int trial = 0; trial < 20; ++trial) {
        const TTTensor t = random_tt(shape, rank, seed + static_cast<std::uint64_t>(trial));
        const auto start = Clock::now();
        const auto res = optima_tt(t, k);
        times.push_back(seconds_since(start));
        if (res.y_min > res.y_max) return -1.0;
    }
    std::nth_element(times.begin(), times.begin() + 10, times.end());
    return times[10];
}

Outcome scaling() {
    const std::size_t n = 20, k = 100;
    const double base = median_time(Shape(32, n), 4, k, 900);
    const double twice_d = median_time(Shape(64, n), 4, k, 920);
    const double twice_r = median_time(Shape(32, n), 8, k, 940);
    const double rd = twice_d / base, rr = twice_r / base;
    return {base > 0 && rd <= 2.5 && rr <= 5.0,
            fmt::format("median of 20, N=20 K=100: d 32->64 x{:.2f} (<= 2.5), R 4->8 x{:.2f} (<= 5); base {:.2f} ms",
                        rd, rr, 1e3 * base)};
}

Outcome format_operations() {
    std::mt19937_64 gen(1005);
    double add_err = 0.0, orth_val = 0.0, orth_gram = 0.0, const_err = 0.0;
    bool ranks_ok = true, bits_ok = true;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 1 + static_cast<std::size_t>(trial % 5);
        const Shape shape = random_shape(gen, d, 2, 6);
        const TTTensor a = random_tt(shape, 1 + trial % 3, gen());
        const TTTensor b = random_tt(shape, 1 + trial % 4, gen());
        const auto fa = to_full(a), fb = to_full(b);
        const auto s = tt_add(a, b), df = tt_dif(a, b);
        const auto fs = to_full(s), fd = to_full(df);
        for (std::size_t i = 0; i < fa.size(); ++i) {
            const double scale = std::max({1.0, std::abs(fa.values()[i]), std::abs(fb.values()[i])});
            add_err = std::max(add_err, std::abs(fs.values()[i] - fa.values()[i] - fb.values()[i]) / scale);
            add_err = std::max(add_err, std::abs(fd.values()[i] - fa.values()[i] + fb.values()[i]) / scale);
        }
        for (std::size_t i = 1; i < d; ++i)
            ranks_ok = ranks_ok && s.ranks()[i] == a.ranks()[i] + b.ranks()[i] && df.ranks()[i] == s.ranks()[i];

        const TTTensor o = tt_orth(a, RankPolicy::reduce);
        const auto fo = to_full(o);
        const double amax = std::max(1.0, max_abs(fa));
        for (std::size_t i = 0; i < fa.size(); ++i)
            orth_val = std::max(orth_val, std::abs(fo.values()[i] - fa.values()[i]) / amax);
        orth_gram = std::max(orth_gram, max_gram_residual(o));

        const double v = std::normal_distribution<double>(0.0, 100.0)(gen);
        for (double x : to_full(tt_const(shape, v)).values()) const_err = std::max(const_err, std::abs(x - v) / std::abs(v));

        const auto back = deserialize(serialize(a));
        for (std::size_t i = 0; i < d; ++i)
            bits_ok = bits_ok && std::memcmp(back.core(i).data().data(), a.core(i).data().data(),
                                             a.core(i).size() * sizeof(double)) == 0;
    }
    const TTTensor cube = random_tt({3, 3, 3}, 2, 1006);
    const auto fc = to_full(cube);
    double c = 0.0;
    for (double x : fc.values()) c += x * x;
    std::vector<double> freq(fc.size(), 0.0);
    const std::size_t draws = 100000;
    for (const auto& idx : sample(cube, draws, 1007)) freq[fc.flat_index(idx)] += 1.0 / static_cast<double>(draws);
    double tv = 0.0;
    for (std::size_t i = 0; i < fc.size(); ++i) tv += std::abs(freq[i] - fc.values()[i] * fc.values()[i] / c);
    tv *= 0.5;

    const bool pass = add_err <= 1e-12 && ranks_ok && orth_val <= 1e-10 && orth_gram <= 1e-10 &&
                      const_err <= 1e-12 && bits_ok && tv <= 0.02;
    return {pass, fmt::format("add/dif {:.2g} (<= 1e-12), ranks add {}, orth values {:.2g} / Gram {:.2g} (<= 1e-10), "
                              "const {:.2g} (<= 1e-12), serialize bit-exact {}, sampler TV {:.4f} (<= 0.02)",
                              add_err, ranks_ok ? "yes" : "no", orth_val, orth_gram, const_err,
                              bits_ok ? "yes" : "no", tv)};
}

struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "random TT-tensors vs brute force", random_tensors},
    {2, "10 benchmarks at d=6 vs brute force", small_functions},
    {3, "5 benchmarks at d=100 with explicit cores", big_functions},
    {4, "success fraction across beam widths", beam_width_histogram},
    {5, "prefix-norm marginals vs brute force", prefix_marginals},
    {6, "beam rows track brute-force marginals", beam_marginals},
    {7, "worst-case bounds for K=1 and K>1", worst_case_bounds},
    {8, "no pruning gives the exact maximum modulus", no_pruning},
    {9, "runtime scaling in d and R", scaling},
    {10, "format operations, serialization, sampler", format_operations},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: " << argv[0] << " [--criterion N]\n";
            return 2;
        }
    }
    bool all_pass = true;
    bool ran = false;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        ran = true;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all_pass = all_pass && o.pass;
        std::cout << fmt::format("[{}] criterion {} ({}): {}", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail)
                  << std::endl;
    }
    if (!ran) {
        std::cerr << "no criterion " << only << '\n';
        return 2;
    }
    return all_pass ? 0 : 1;
}
