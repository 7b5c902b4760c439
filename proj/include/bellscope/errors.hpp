#pragma once

#include <stdexcept>
#include <string>

namespace bellscope {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mode counts or indices disagree between values that must share a layout.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Operation requires a nonzero (normalizable) state.
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

// Input was required to be normalized and is not.
class NormalizationError : public Error {
public:
    using Error::Error;
};

// Matrix fails the unitarity residual bound.
class UnitarityError : public Error {
public:
    using Error::Error;
};

// Malformed strategy tree, configuration, or incomparable inputs.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A requested computation exceeds the configured size guard.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

}  // namespace bellscope
