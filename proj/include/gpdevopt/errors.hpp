#pragma once

#include <stdexcept>
#include <string>

namespace gpdev {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes, ranges or names that violate an operation's preconditions.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// R + delta*I could not be factored even after the nugget was applied.
class IllConditioned : public Error {
public:
    using Error::Error;
};

/// The response is constant, so the deviance has no finite minimum.
class DegenerateDesign : public Error {
public:
    using Error::Error;
};

/// Every start of an optimizer ended at an infinite deviance.
class Unfittable : public Error {
public:
    using Error::Error;
};

}  // namespace gpdev
