// Exception hierarchy shared by all carnot components.
#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible ambient dimensions or an out-of-range coordinate index.
struct DimensionError : Error {
    using Error::Error;
};

// Evaluation requested inside the excluded singular set (e.g. the Kaplan
// norm jets at the group identity).
struct SingularPointError : Error {
    using Error::Error;
};

// Operation not defined for the given group/potential structure.
struct UnsupportedError : Error {
    using Error::Error;
};

// Operator degree cap exceeded during composition / ad-expansion.
struct OperatorOverflowError : Error {
    using Error::Error;
};

// e^{-U} not normalizable for the requested parameterization.
struct InvalidMeasureError : Error {
    using Error::Error;
};

// An observable evaluated to a non-finite value at a sample point.
struct TaintedEstimateError : Error {
    using Error::Error;
};

// Quadrature box too small: boundary mass above threshold.
struct TruncationError : Error {
    using Error::Error;
};

// Config text could not be parsed; message carries line/column.
struct ParseError : Error {
    using Error::Error;
};

// Config parsed but the scenario is invalid; message carries the field path.
struct ScenarioError : Error {
    using Error::Error;
};

} // namespace carnot
