#pragma once

#include <cstddef>
#include <vector>

#include "ttopt/dense.hpp"
#include "ttopt/multi_index.hpp"

// Brute-force ground truth on dense arrays. Nothing here depends on the TT
// headers; ties always resolve to the first index in row-major order.
namespace ttopt::oracle {

struct MinMax {
    MultiIndex i_min;
    double y_min = 0.0;
    MultiIndex i_max;
    double y_max = 0.0;
};

/// Exact extremes by a linear scan. Throws std::domain_error on an empty array.
MinMax brute_min_max(const DenseArray& full);

struct Entry {
    MultiIndex index;
    double value = 0.0;
};

/// The min(k, size) entries of largest |value|, descending.
std::vector<Entry> brute_top_abs(const DenseArray& full, std::size_t k);

/// Sum of squared entries over all elements whose leading indices equal
/// `prefix` (any length 0..d).
double brute_prefix_mass(const DenseArray& full, const MultiIndex& prefix);

/// Unnormalized conditional masses of mode `partial.size()` given the
/// prefix: entry n is brute_prefix_mass(full, partial + n).
std::vector<double> brute_marginal_mass(const DenseArray& full, const MultiIndex& partial);

/// Normalized brute_marginal_mass. Throws std::domain_error on zero mass.
std::vector<double> brute_marginal(const DenseArray& full, const MultiIndex& partial);

}  // namespace ttopt::oracle
