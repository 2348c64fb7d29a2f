#include "ttopt/multi_index.hpp"

#include <stdexcept>

namespace ttopt {

MultiIndex MultiIndex::one_based(std::span<const std::size_t> entries) {
    std::vector<std::size_t> zero;
    zero.reserve(entries.size());
    for (auto e : entries) {
        if (e == 0) throw std::domain_error("one-based index entry must be >= 1");
        zero.push_back(e - 1);
    }
    return MultiIndex(std::move(zero));
}

std::vector<std::size_t> MultiIndex::to_one_based() const {
    std::vector<std::size_t> out(entries_);
    for (auto& e : out) ++e;
    return out;
}

std::string MultiIndex::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(entries_[i] + 1);
    }
    return s + ")";
}

void check_index(const MultiIndex& idx, std::span<const std::size_t> shape) {
    if (idx.size() != shape.size())
        throw std::domain_error("multi-index has " + std::to_string(idx.size()) +
                                " entries, tensor has " + std::to_string(shape.size()) + " modes");
    for (std::size_t i = 0; i < shape.size(); ++i)
        if (idx[i] >= shape[i])
            throw std::domain_error("index entry " + std::to_string(i + 1) + " = " +
                                    std::to_string(idx[i] + 1) + " exceeds mode size " +
                                    std::to_string(shape[i]));
}

}  // namespace ttopt
