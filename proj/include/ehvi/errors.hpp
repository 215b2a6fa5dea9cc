#pragma once

#include <stdexcept>
#include <string>

namespace ehvi {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct NotPositiveDefinite : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct DofTooSmall : Error {
    using Error::Error;
};
struct OrderOutOfRange : Error {
    using Error::Error;
};
struct NodeBudgetExceeded : Error {
    using Error::Error;
};
struct EmptyGrid : Error {
    using Error::Error;
};
struct EmptyFront : Error {
    using Error::Error;
};
struct PointNotInSet : Error {
    using Error::Error;
};
struct NotBivariate : Error {
    using Error::Error;
};
struct NotIndependent : Error {
    using Error::Error;
};
struct ResolutionTooLow : Error {
    using Error::Error;
};
struct DegenerateSpan : Error {
    using Error::Error;
};
struct InvalidSpec : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ReferenceNotDominated : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct TooFewSamples : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ehvi
