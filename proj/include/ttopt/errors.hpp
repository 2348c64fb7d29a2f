#pragma once

#include <stdexcept>

namespace ttopt {

/// Raised when an operation would exceed a configured element or memory
/// budget (densification, index joins, oracle scans).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the TT file readers on malformed or truncated input.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ttopt
