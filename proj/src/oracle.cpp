#include "ttopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ttopt::oracle {

namespace {

struct Block {
    std::size_t offset;
    std::size_t length;
};

Block prefix_block(const DenseArray& full, const MultiIndex& prefix) {
    const auto shape = full.shape();
    if (prefix.size() > shape.size()) throw std::domain_error("prefix longer than array rank");
    std::size_t pos = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (prefix[i] >= shape[i]) throw std::domain_error("prefix entry out of range");
        pos = pos * shape[i] + prefix[i];
    }
    std::size_t len = 1;
    for (std::size_t i = prefix.size(); i < shape.size(); ++i) len *= shape[i];
    return {pos * len, len};
}

}  // namespace

MinMax brute_min_max(const DenseArray& full) {
    const auto v = full.values();
    if (v.empty()) throw std::domain_error("brute_min_max: empty array");
    std::size_t lo = 0, hi = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] < v[lo]) lo = k;
        if (v[k] > v[hi]) hi = k;
    }
    return {full.unravel(lo), v[lo], full.unravel(hi), v[hi]};
}

std::vector<Entry> brute_top_abs(const DenseArray& full, std::size_t k) {
    const auto v = full.values();
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double fa = std::abs(v[a]), fb = std::abs(v[b]);
                          if (fa != fb) return fa > fb;
                          return a < b;
                      });
    std::vector<Entry> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back({full.unravel(order[i]), v[order[i]]});
    return out;
}

double brute_prefix_mass(const DenseArray& full, const MultiIndex& prefix) {
    const auto [offset, length] = prefix_block(full, prefix);
    const auto v = full.values().subspan(offset, length);
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return sum;
}

std::vector<double> brute_marginal_mass(const DenseArray& full, const MultiIndex& partial) {
    if (partial.size() >= full.dim()) throw std::domain_error("partial index leaves no free mode");
    const std::size_t n_size = full.shape()[partial.size()];
    std::vector<double> out(n_size);
    MultiIndex prefix = partial;
    prefix.push_back(0);
    for (std::size_t n = 0; n < n_size; ++n) {
        prefix[partial.size()] = n;
        out[n] = brute_prefix_mass(full, prefix);
    }
    return out;
}

std::vector<double> brute_marginal(const DenseArray& full, const MultiIndex& partial) {
    auto mass = brute_marginal_mass(full, partial);
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (total == 0.0) throw std::domain_error("brute_marginal: zero total mass");
    for (double& m : mass) m /= total;
    return mass;
}

}  // namespace ttopt::oracle
