#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ttopt {

/// Position of one element in a d-dimensional array.
///
/// Entries are stored zero-based. The external convention (CLI output, test
/// fixtures written against the published formulas, files) is one-based:
/// use `one_based()` / `to_one_based()` at those boundaries.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<std::size_t> zero_based)
        : entries_(std::move(zero_based)) {}
    MultiIndex(std::initializer_list<std::size_t> zero_based) : entries_(zero_based) {}

    /// Builds an index from one-based entries; throws std::domain_error on a 0.
    static MultiIndex one_based(std::span<const std::size_t> entries);
    static MultiIndex one_based(std::initializer_list<std::size_t> entries) {
        return one_based(std::span<const std::size_t>(entries.begin(), entries.size()));
    }

    [[nodiscard]] std::vector<std::size_t> to_one_based() const;

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    std::size_t operator[](std::size_t i) const { return entries_[i]; }
    std::size_t& operator[](std::size_t i) { return entries_[i]; }
    [[nodiscard]] std::span<const std::size_t> entries() const noexcept { return entries_; }

    void push_back(std::size_t zero_based) { entries_.push_back(zero_based); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    /// One-based text form, e.g. "(1,2,3)".
    [[nodiscard]] std::string str() const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<std::size_t> entries_;
};

/// Throws std::domain_error unless `idx` has one entry per mode and each is
/// below the mode size.
void check_index(const MultiIndex& idx, std::span<const std::size_t> shape);

}  // namespace ttopt
