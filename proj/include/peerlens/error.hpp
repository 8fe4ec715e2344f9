#pragma once

#include <stdexcept>
#include <string>

namespace peerlens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (probabilities, weights, grid sizes...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A score or divergence is infinite, e.g. the ignorance score of an outcome
/// the forecast called impossible.
class InfiniteScore : public Error {
public:
    using Error::Error;
};

/// Bayesian updating on an outcome that the prior predicts with zero mass.
class ImpossibleEvidence : public Error {
public:
    using Error::Error;
};

/// An outcome or state that does not belong to the domain it is used with.
class DomainMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace peerlens
