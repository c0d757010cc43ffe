#ifndef HODGEFIR_ERRORS_HPP
#define HODGEFIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hodgefir {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A simplex references a face that is not part of the complex.
struct DanglingSimplex : Error {
    using Error::Error;
};

/// Eigenvector could not be attributed to the gradient or curl space.
struct AmbiguousEigenvector : Error {
    using Error::Error;
};

struct EigensolverFailure : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ZeroReference : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace hodgefir

#endif
