#pragma once

#include <stdexcept>
#include <string>

namespace dsf {

// Invalid input: maps to exit code 2 in the command-line tool.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that was set up correctly but could not deliver a result
// within its accuracy contract. Maps to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PoleError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Raised when c - a - b is an integer so the z -> 1 - z connection formula is
// unusable. Callers fall back to direct summation.
class DegenerateConnectionError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class SingularTimeError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class DegenerateAxisError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StepSizeUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotConvergedError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureNotConverged : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitQualityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace dsf
