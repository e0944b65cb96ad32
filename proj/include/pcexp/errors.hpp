#pragma once

#include <stdexcept>
#include <string>

namespace pcexp {

// Caller broke a documented precondition.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Interpolated data failed the held-out check.
struct NotPolynomialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A size guard (cone bonds, slice points, dimension) was exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pcexp
