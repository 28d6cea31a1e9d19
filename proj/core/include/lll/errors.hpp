#pragma once

#include <stdexcept>
#include <string>

namespace lll {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed DIMACS or native model text.
struct ParseError : Error {
    using Error::Error;
};

/// Structurally well-formed input that violates a model invariant
/// (probabilities not summing to 1, unknown value id, bad scope, ...).
struct InvalidModel : Error {
    using Error::Error;
};

/// An enumeration, table column, or step budget overflowed its cap.
struct CapExceeded : Error {
    using Error::Error;
};

/// A criterion precondition does not hold for the requested operation.
struct CriterionUnsatisfied : Error {
    using Error::Error;
};

/// merge() was called on witness DAGs that are not consistent.
struct InconsistentMerge : Error {
    using Error::Error;
};

/// A variable distribution cannot be realized in the requested exact form
/// (e.g. not q-adic for the chosen field size).
struct UnsupportedDistribution : Error {
    using Error::Error;
};

}  // namespace lll
