// Exception types shared by the library and the command-line front end.

#pragma once

#include <stdexcept>
#include <string>

namespace gaussdyn {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Coupling strong enough to make a normal-mode frequency imaginary.
class InstabilityError : public DomainError {
public:
    using DomainError::DomainError;
};

// Requested operation is not defined for the given model or parameters.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A numerical routine failed to reach its target accuracy or produced
// non-finite output.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of panel budget.
class QuadratureFailure : public NumericalFailure {
public:
    QuadratureFailure(const std::string& what, double attained_error)
        : NumericalFailure(what), attained_error_(attained_error) {}

    double attained_error() const noexcept { return attained_error_; }

private:
    double attained_error_;
};

// Covariance integration produced NaN/Inf or left the coefficient table.
class IntegrationFailure : public NumericalFailure {
public:
    IntegrationFailure(const std::string& what, double last_good_time)
        : NumericalFailure(what), last_good_time_(last_good_time) {}

    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

// Covariance matrix that cannot describe a quantum state (for example a
// non-positive symplectic spectrum).
class InvalidStateError : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

}  // namespace gaussdyn
