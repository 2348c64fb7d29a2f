#include "ttopt/dense.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "ttopt/errors.hpp"

namespace ttopt {

namespace {

std::size_t element_count(std::span<const std::size_t> shape) {
    if (shape.empty()) throw std::domain_error("array must have at least one mode");
    std::size_t n = 1;
    for (auto s : shape) {
        if (s == 0) throw std::domain_error("mode sizes must be >= 1");
        n *= s;
    }
    return n;
}

}  // namespace

DenseArray::DenseArray(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
    values_.assign(element_count(shape_), 0.0);
}

DenseArray::DenseArray(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    if (element_count(shape_) != values_.size())
        throw std::domain_error("value count does not match shape");
}

std::size_t DenseArray::flat_index(const MultiIndex& idx) const {
    check_index(idx, shape_);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < shape_.size(); ++i) flat = flat * shape_[i] + idx[i];
    return flat;
}

MultiIndex DenseArray::unravel(std::size_t flat) const {
    std::vector<std::size_t> idx(shape_.size());
    for (std::size_t i = shape_.size(); i-- > 0;) {
        idx[i] = flat % shape_[i];
        flat /= shape_[i];
    }
    return MultiIndex(std::move(idx));
}

std::size_t checked_element_count(std::span<const std::size_t> shape, std::size_t budget) {
    std::size_t n = 1;
    for (auto s : shape) {
        if (s == 0) throw std::domain_error("mode sizes must be >= 1");
        if (n > std::numeric_limits<std::size_t>::max() / s || n * s > budget)
            throw ResourceError("element count exceeds budget of " + std::to_string(budget));
        n *= s;
    }
    return n;
}

}  // namespace ttopt
