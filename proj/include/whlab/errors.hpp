#pragma once

#include <stdexcept>
#include <string>

namespace whlab {

// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input failed a structural precondition (non-Hermitian, wrong shape, ...).
class InputValidationError : public Error {
public:
    using Error::Error;
};

// An iterative or direct numerical kernel broke down.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, int iterations = -1)
        : Error(iterations >= 0 ? what + " (after " + std::to_string(iterations) + " iterations)" : what),
          iterations_(iterations) {}

    int iterations() const noexcept { return iterations_; }

private:
    int iterations_;
};

// Argument is well-formed but lies outside the mathematical domain of the map.
class DomainError : public Error {
public:
    using Error::Error;
};

// Index, truncation level or window exceeded.
class RangeError : public Error {
public:
    using Error::Error;
};

// A user-supplied scalar function could not be evaluated on the spectrum.
class EvaluationError : public Error {
public:
    using Error::Error;
};

// Two independently computed sides of an identity disagreed.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace whlab
