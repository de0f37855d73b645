#pragma once

#include <stdexcept>

namespace annulus {

/// Input lies outside the domain where an operation is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series or iteration did not reach its tolerance within its budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Measure masses do not add up to the required total.
class NormalizationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MonotonicityViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RangeViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Adaptive integrator hit h_min without meeting tolerance.
class StepFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A trajectory came within the boundary guard of the domain boundary.
class BoundaryExit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LiftingFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested operation is not defined for this kind of input.
class Unsupported : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace annulus
