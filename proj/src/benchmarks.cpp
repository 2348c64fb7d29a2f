#include "ttopt/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ttopt/errors.hpp"

namespace ttopt::bench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSchwefelShift = 418.9829;
constexpr double kSchwefelArgmin = 420.9687462275036;

double ackley(std::span<const double> x) {
    const auto d = static_cast<double>(x.size());
    double sq = 0.0, cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * kPi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::numbers::e;
}

double alpine(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v * std::sin(v) + 0.1 * v);
    return s;
}

double dixon_price(std::span<const double> x) {
    double s = (x[0] - 1.0) * (x[0] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double t = 2.0 * x[i] * x[i] - x[i - 1];
        s += static_cast<double>(i + 1) * t * t;
    }
    return s;
}

double exponential(std::span<const double> x) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    return -std::exp(-0.5 * sq);
}

double griewank(std::span<const double> x) {
    double sq = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sq += x[i] * x[i];
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + sq / 4000.0 - prod;
}

double michalewicz(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double inner = std::sin(static_cast<double>(i + 1) * x[i] * x[i] / kPi);
        s -= std::sin(x[i]) * std::pow(inner, 20);
    }
    return s;
}

double qing_term(std::size_t i, double v) {
    const double t = v * v - static_cast<double>(i + 1);
    return t * t;
}

double qing(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += qing_term(i, x[i]);
    return s;
}

double rastrigin_term(double v) { return 10.0 + v * v - 10.0 * std::cos(2.0 * kPi * v); }

double rastrigin(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += rastrigin_term(v);
    return s;
}

// Schaffer F7 over consecutive coordinate pairs.
double schaffer(std::span<const double> x) {
    auto term = [](double s) { return std::sqrt(s) * (std::sin(50.0 * std::pow(s, 0.2)) + 1.0); };
    if (x.size() == 1) {
        const double t = term(std::abs(x[0]));
        return t * t;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) acc += term(std::hypot(x[i], x[i + 1]));
    acc /= static_cast<double>(x.size() - 1);
    return acc * acc;
}

double schwefel_term(double v) { return kSchwefelShift - v * std::sin(std::sqrt(std::abs(v))); }

double schwefel(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += schwefel_term(v);
    return s;
}

std::function<std::vector<double>(std::size_t)> constant_argmin(double v) {
    return [v](std::size_t d) { return std::vector<double>(d, v); };
}

std::function<double(std::size_t)> constant_value(double v) {
    return [v](std::size_t) { return v; };
}

// Univariate factor sampled on the nodes of every mode; `f(i, x)` gets the
// zero-based mode number.
template <typename F>
std::vector<std::vector<double>> sample_modes(const GridSpec& g, F f) {
    std::vector<std::vector<double>> out(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        const auto nodes = g.nodes(i);
        out[i].reserve(nodes.size());
        for (double x : nodes) out[i].push_back(f(i, x));
    }
    return out;
}

TTTensor exponential_tt(const GridSpec& g) {
    return product_of_univariate(
        sample_modes(g, [](std::size_t, double x) { return std::exp(-0.5 * x * x); }), -1.0);
}

TTTensor griewank_tt(const GridSpec& g) {
    const auto d = static_cast<double>(g.dim());
    const auto quadratic = sum_of_univariate(
        sample_modes(g, [d](std::size_t, double x) { return x * x / 4000.0 + 1.0 / d; }));
    const auto cosines = product_of_univariate(
        sample_modes(g, [](std::size_t i, double x) { return std::cos(x / std::sqrt(static_cast<double>(i + 1))); }),
        -1.0);
    return tt_add(quadratic, cosines);
}

TTTensor qing_tt(const GridSpec& g) {
    return sum_of_univariate(sample_modes(g, qing_term));
}

TTTensor rastrigin_tt(const GridSpec& g) {
    return sum_of_univariate(sample_modes(g, [](std::size_t, double x) { return rastrigin_term(x); }));
}

TTTensor schwefel_tt(const GridSpec& g) {
    return sum_of_univariate(sample_modes(g, [](std::size_t, double x) { return schwefel_term(x); }));
}

std::vector<Benchmark> make_registry() {
    std::vector<Benchmark> r;
    r.push_back({"Ackley", -32.768, 32.768, ackley, constant_argmin(0.0), constant_value(0.0), true, {}, {}});
    r.push_back({"Alpine", -10.0, 10.0, alpine, constant_argmin(0.0), constant_value(0.0), true, {}, {}});
    r.back().separable_term = [](std::size_t, double v) { return std::abs(v * std::sin(v) + 0.1 * v); };
    r.push_back({"Dixon", -10.0, 10.0, dixon_price,
                 [](std::size_t d) {
                     std::vector<double> x(d);
                     for (std::size_t i = 0; i < d; ++i) {
                         const double p = std::pow(2.0, static_cast<double>(i + 1));
                         x[i] = std::pow(2.0, -(p - 2.0) / p);
                     }
                     return x;
                 },
                 constant_value(0.0), true, {}, {}});
    r.push_back({"Exponential", -1.0, 1.0, exponential, constant_argmin(0.0), constant_value(-1.0), true,
                 exponential_tt, {}});
    r.push_back({"Grienwank", -600.0, 600.0, griewank, constant_argmin(0.0), constant_value(0.0), true,
                 griewank_tt, {}});
    r.push_back({"Michalewicz", 0.0, kPi, michalewicz, {}, {}, false, {}, {}});
    r.back().separable_term = [](std::size_t i, double v) {
        return -std::sin(v) * std::pow(std::sin(static_cast<double>(i + 1) * v * v / kPi), 20);
    };
    r.push_back({"Qing", -500.0, 500.0, qing,
                 [](std::size_t d) {
                     std::vector<double> x(d);
                     for (std::size_t i = 0; i < d; ++i) x[i] = std::sqrt(static_cast<double>(i + 1));
                     return x;
                 },
                 constant_value(0.0), true, qing_tt, {}});
    r.back().separable_term = qing_term;
    r.push_back({"Rastrigin", -5.12, 5.12, rastrigin, constant_argmin(0.0), constant_value(0.0), true,
                 rastrigin_tt, {}});
    r.back().separable_term = [](std::size_t, double v) { return rastrigin_term(v); };
    r.push_back({"Schaffer", -100.0, 100.0, schaffer, constant_argmin(0.0), constant_value(0.0), true, {}, {}});
    // The shift constant is the customary 4-digit rounding, so the minimum is
    // only approximately zero (about 1.3e-5 per coordinate).
    r.push_back({"Schwefel", -500.0, 500.0, schwefel, constant_argmin(kSchwefelArgmin),
                 [](std::size_t d) { return static_cast<double>(d) * schwefel_term(kSchwefelArgmin); },
                 false, schwefel_tt, {}});
    r.back().separable_term = [](std::size_t, double v) { return schwefel_term(v); };
    return r;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

GridSpec::GridSpec(std::vector<Mode> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) throw std::domain_error("grid needs at least one mode");
    for (const auto& m : modes_) {
        if (!(m.lower < m.upper)) throw std::domain_error("grid mode needs lower < upper");
        if (m.nodes < 2) throw std::domain_error("grid mode needs at least 2 nodes");
    }
}

GridSpec GridSpec::uniform(std::size_t d, double lower, double upper, std::size_t nodes) {
    return GridSpec(std::vector<Mode>(d, Mode{lower, upper, nodes}));
}

Shape GridSpec::shape() const {
    Shape s;
    for (const auto& m : modes_) s.push_back(m.nodes);
    return s;
}

double GridSpec::node(std::size_t mode, std::size_t i) const {
    const auto& m = modes_.at(mode);
    if (i >= m.nodes) throw std::domain_error("grid node index out of range");
    const std::size_t last = m.nodes - 1;
    double t;
    if (2 * i == last)
        t = 0.0;
    else if (2 * i < last)
        t = std::cos(kPi * static_cast<double>(i) / static_cast<double>(last));
    else
        t = -std::cos(kPi * static_cast<double>(last - i) / static_cast<double>(last));
    const double center = 0.5 * (m.lower + m.upper);
    const double half = 0.5 * (m.upper - m.lower);
    if (i == 0) return m.upper;
    if (i == last) return m.lower;
    return center + half * t;
}

std::vector<double> GridSpec::nodes(std::size_t mode) const {
    std::vector<double> out(modes_.at(mode).nodes);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(mode, i);
    return out;
}

std::vector<double> GridSpec::point(const MultiIndex& idx) const {
    check_index(idx, shape());
    std::vector<double> x(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) x[i] = node(i, idx[i]);
    return x;
}

MultiIndex nearest_grid_index(const GridSpec& grid, std::span<const double> x) {
    if (x.size() != grid.dim()) throw std::domain_error("point dimension does not match grid");
    std::vector<std::size_t> idx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& m = grid.mode(i);
        if (!(x[i] >= m.lower && x[i] <= m.upper))
            throw std::domain_error("point coordinate " + std::to_string(i + 1) + " outside the grid box");
        std::size_t best = 0;
        double best_dist = std::abs(x[i] - grid.node(i, 0));
        for (std::size_t k = 1; k < m.nodes; ++k) {
            const double dist = std::abs(x[i] - grid.node(i, k));
            if (dist < best_dist) {
                best = k;
                best_dist = dist;
            }
        }
        idx[i] = best;
    }
    return MultiIndex(std::move(idx));
}

const std::vector<Benchmark>& all_benchmarks() {
    static const std::vector<Benchmark> registry = make_registry();
    return registry;
}

const Benchmark& benchmark_by_name(std::string_view name) {
    std::string key = lower(name);
    if (key == "griewank") key = "grienwank";
    for (const auto& b : all_benchmarks())
        if (lower(b.name) == key) return b;
    throw std::domain_error("unknown benchmark: " + std::string(name));
}

DenseArray discretize_full(const Benchmark& b, const GridSpec& grid, std::size_t budget) {
    const Shape shape = grid.shape();
    const std::size_t total = checked_element_count(shape, budget);
    std::vector<std::vector<double>> nodes(grid.dim());
    for (std::size_t i = 0; i < grid.dim(); ++i) nodes[i] = grid.nodes(i);

    std::vector<double> values(total);
    std::vector<std::size_t> idx(grid.dim(), 0);
    std::vector<double> x(grid.dim());
    for (std::size_t i = 0; i < grid.dim(); ++i) x[i] = nodes[i][0];
    for (std::size_t flat = 0; flat < total; ++flat) {
        values[flat] = b.evaluate(x);
        // Row-major increment: last mode fastest.
        for (std::size_t i = grid.dim(); i-- > 0;) {
            if (++idx[i] < shape[i]) {
                x[i] = nodes[i][idx[i]];
                break;
            }
            idx[i] = 0;
            x[i] = nodes[i][0];
        }
    }
    return DenseArray(shape, std::move(values));
}

TTTensor explicit_cores(std::string_view name, const GridSpec& grid) {
    const auto& b = benchmark_by_name(name);
    if (!b.explicit_tt) throw std::domain_error("no explicit TT-cores for benchmark " + b.name);
    return b.explicit_tt(grid);
}

std::optional<double> separable_grid_min(const Benchmark& b, const GridSpec& grid) {
    if (!b.separable_term) return std::nullopt;
    double total = 0.0;
    for (std::size_t i = 0; i < grid.dim(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (double x : grid.nodes(i)) best = std::min(best, b.separable_term(i, x));
        total += best;
    }
    return total;
}

TTTensor sum_of_univariate(const std::vector<std::vector<double>>& terms) {
    if (terms.empty()) throw std::domain_error("sum_of_univariate: no modes");
    const std::size_t d = terms.size();
    if (d == 1) return TTTensor({TTCore(1, terms[0].size(), 1, terms[0])});
    std::vector<TTCore> cores;
    cores.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& g = terms[i];
        const std::size_t n_size = g.size();
        if (i == 0) {
            // row [g_1(x), 1]
            TTCore c(1, n_size, 2);
            for (std::size_t n = 0; n < n_size; ++n) {
                c(0, n, 0) = g[n];
                c(0, n, 1) = 1.0;
            }
            cores.push_back(std::move(c));
        } else if (i + 1 == d) {
            // column [1, g_d(x)]^T
            TTCore c(2, n_size, 1);
            for (std::size_t n = 0; n < n_size; ++n) {
                c(0, n, 0) = 1.0;
                c(1, n, 0) = g[n];
            }
            cores.push_back(std::move(c));
        } else {
            // [[1, 0], [g_i(x), 1]]
            TTCore c(2, n_size, 2);
            for (std::size_t n = 0; n < n_size; ++n) {
                c(0, n, 0) = 1.0;
                c(1, n, 0) = g[n];
                c(1, n, 1) = 1.0;
            }
            cores.push_back(std::move(c));
        }
    }
    return TTTensor(std::move(cores));
}

TTTensor product_of_univariate(const std::vector<std::vector<double>>& factors, double sign) {
    if (factors.empty()) throw std::domain_error("product_of_univariate: no modes");
    std::vector<TTCore> cores;
    cores.reserve(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::vector<double> h = factors[i];
        if (i + 1 == factors.size())
            for (double& v : h) v *= sign;
        cores.emplace_back(1, h.size(), 1, std::move(h));
    }
    return TTTensor(std::move(cores));
}

}  // namespace ttopt::bench
