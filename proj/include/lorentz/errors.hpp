#pragma once

#include <stdexcept>
#include <string>

namespace lorentz {

// Input outside the domain of an operation (mismatched atoms, t <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Operation asked for a norm variant or exponent branch it does not support.
class UnsupportedVariant : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A stated precondition does not hold; `witness` names the offending data.
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(const std::string& what, std::string witness)
        : std::invalid_argument(what), witness_(std::move(witness)) {}

    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

// Exhaustive oracles refuse instances that would blow up combinatorially.
class RefusedError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace lorentz
