#pragma once

#include <stdexcept>
#include <string>

namespace varbesov {

/// Raised when an argument lies outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a bracketing search runs past its doubling budget.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw DomainError(what);
}

}  // namespace varbesov
