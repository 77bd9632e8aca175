#pragma once

#include <stdexcept>
#include <string>

namespace fsum {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A constructor parameter is outside the family's domain (alpha <= 0, ...).
struct InvalidParameter : Error {
    using Error::Error;
};

/// An argument is outside the mathematical domain of a formula.
struct DomainError : Error {
    using Error::Error;
};

/// The coefficient sequence fails the summability hypothesis.
struct NotSummable : Error {
    using Error::Error;
};

/// The requested certified radius cannot be reached within the term
/// or grid budget.
struct TolUnreachable : Error {
    using Error::Error;
};

/// The family carries no wired derivative (custom tables).
struct NotDifferentiable : Error {
    using Error::Error;
};

/// A test function violates the unit-ball / zero-mean admissibility
/// conditions.
struct NotAdmissible : Error {
    using Error::Error;
};

/// Malformed experiment configuration; the message carries the field path.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace fsum
