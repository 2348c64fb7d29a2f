#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttopt/dense.hpp"
#include "ttopt/multi_index.hpp"
#include "ttopt/tt_tensor.hpp"

namespace ttopt::bench {

/// Per-mode Chebyshev-Gauss-Lobatto discretization. Node i (zero-based) of
/// a mode on [a, b] with N nodes is (a+b)/2 + (b-a)/2 * cos(pi * i / (N-1)),
/// so node 0 is the upper bound b and node N-1 the lower bound a. Nodes are
/// computed so that mirrored pairs are exact negatives about the center.
class GridSpec {
public:
    struct Mode {
        double lower;
        double upper;
        std::size_t nodes;
    };

    /// Throws std::domain_error unless every mode has lower < upper, N >= 2.
    explicit GridSpec(std::vector<Mode> modes);
    static GridSpec uniform(std::size_t d, double lower, double upper, std::size_t nodes);

    [[nodiscard]] std::size_t dim() const noexcept { return modes_.size(); }
    [[nodiscard]] const Mode& mode(std::size_t i) const { return modes_[i]; }
    [[nodiscard]] Shape shape() const;
    [[nodiscard]] double node(std::size_t mode, std::size_t i) const;
    [[nodiscard]] std::vector<double> nodes(std::size_t mode) const;
    /// Coordinates of a grid multi-index.
    [[nodiscard]] std::vector<double> point(const MultiIndex& idx) const;

private:
    std::vector<Mode> modes_;
};

/// Per-mode nearest node to `x`, ties to the lower node index. Throws
/// std::domain_error when x has the wrong length or leaves the box.
MultiIndex nearest_grid_index(const GridSpec& grid, std::span<const double> x);

struct Benchmark {
    std::string name;
    /// Box [lower, upper] applied to every coordinate.
    double lower = 0.0;
    double upper = 0.0;
    std::function<double(std::span<const double>)> evaluate;
    /// Known global minimizer for a given d; empty when none is known in
    /// closed form.
    std::function<std::vector<double>(std::size_t)> argmin;
    /// f(argmin(d)) for d-dimensional problems, when argmin is set.
    std::function<double(std::size_t)> min_value;
    /// True when evaluate(argmin(d)) equals min_value(d) up to rounding.
    bool exact_minimum = false;
    /// Exact TT-cores on a grid; empty when the function has none here.
    std::function<TTTensor(const GridSpec&)> explicit_tt;
    /// For additively separable functions, f(x) = sum_i term(i, x_i) with a
    /// zero-based i; empty otherwise.
    std::function<double(std::size_t, double)> separable_term;

    [[nodiscard]] GridSpec grid(std::size_t d, std::size_t nodes) const {
        return GridSpec::uniform(d, lower, upper, nodes);
    }
};

/// The ten benchmark functions, in the order Ackley, Alpine, Dixon,
/// Exponential, Grienwank, Michalewicz, Qing, Rastrigin, Schaffer, Schwefel.
const std::vector<Benchmark>& all_benchmarks();

/// Case-insensitive lookup ("griewank" is accepted for Grienwank). Throws
/// std::domain_error for unknown names.
const Benchmark& benchmark_by_name(std::string_view name);

/// f at every grid node, row-major. Throws ResourceError past `budget`.
DenseArray discretize_full(const Benchmark& b, const GridSpec& grid,
                           std::size_t budget = kDefaultElementBudget);

/// Exact TT representation for Exponential, Grienwank, Qing, Rastrigin and
/// Schwefel (ranks 1, 3, 2, 2, 2). Throws std::domain_error for other names.
TTTensor explicit_cores(std::string_view name, const GridSpec& grid);

/// Exact minimum of f over the grid nodes, found coordinate by coordinate.
/// Empty unless b is separable.
std::optional<double> separable_grid_min(const Benchmark& b, const GridSpec& grid);

/// Rank-2 train of f(x) = sum_i g_i(x_i), given g_i sampled on each mode.
TTTensor sum_of_univariate(const std::vector<std::vector<double>>& terms);

/// Rank-1 train of f(x) = sign * prod_i h_i(x_i).
TTTensor product_of_univariate(const std::vector<std::vector<double>>& factors, double sign = 1.0);

}  // namespace ttopt::bench
