#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ttopt/multi_index.hpp"

namespace ttopt {

/// Default cap on the number of elements any densification may produce.
inline constexpr std::size_t kDefaultElementBudget = 50'000'000;

/// Plain d-dimensional array, row-major (last mode varies fastest).
class DenseArray {
public:
    DenseArray() = default;
    /// Zero-filled array; throws std::domain_error on an empty shape or a zero
    /// mode size.
    explicit DenseArray(std::vector<std::size_t> shape);
    DenseArray(std::vector<std::size_t> shape, std::vector<double> values);

    [[nodiscard]] std::span<const std::size_t> shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t dim() const noexcept { return shape_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const& noexcept { return values_; }
    [[nodiscard]] std::span<double> values() & noexcept { return values_; }
    // On a temporary, hand the storage over so `for (x : to_full(t).values())` stays valid.
    [[nodiscard]] std::vector<double> values() && noexcept { return std::move(values_); }

    [[nodiscard]] std::size_t flat_index(const MultiIndex& idx) const;
    [[nodiscard]] MultiIndex unravel(std::size_t flat) const;

    double operator[](const MultiIndex& idx) const { return values_[flat_index(idx)]; }
    double& operator[](const MultiIndex& idx) { return values_[flat_index(idx)]; }

private:
    std::vector<std::size_t> shape_;
    std::vector<double> values_;
};

/// Product of mode sizes; throws ResourceError if it exceeds `budget`
/// (overflow counts as exceeding).
std::size_t checked_element_count(std::span<const std::size_t> shape, std::size_t budget);

}  // namespace ttopt
