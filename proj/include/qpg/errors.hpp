#pragma once

#include <stdexcept>
#include <string>

namespace qpg {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands live on different truncations / incompatible shapes.
struct ShapeError : Error {
    using Error::Error;
};

// Index out of range (slot, matrix entry, word letter).
struct IndexError : Error {
    using Error::Error;
};

// Domain constraint violated (invalid parameters, bad monomial indices,
// non-member morphism, wrong word shape).
struct ConstraintError : Error {
    using Error::Error;
};

// Malformed serialized input; message carries a location.
struct ParseError : Error {
    using Error::Error;
};

// A groupoid operation left the truncation box; caller should enlarge
// the translation bound B or the level cutoff K.
struct OverflowError : Error {
    using Error::Error;
};

// An enumeration or expansion exceeded the configured size cap.
struct CapError : Error {
    using Error::Error;
};

} // namespace qpg
