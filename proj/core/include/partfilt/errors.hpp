#pragma once

#include <stdexcept>
#include <string>

namespace pf {

/// Malformed input file (reports line number where known).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Node/class index out of declared range.
struct IndexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix/vector dimension mismatch.
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid argument value (ratio out of range, bad probability, ...).
struct ArgumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problem too large for the dense oracle path.
struct ScaleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite values or violated numeric invariants.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pf
