// errors.hpp: exception hierarchy shared by all modules

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pbgfluor {

using Complex = std::complex<double>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Operation not defined for the active reservoir model or drive regime.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

// Shared denominator of the frequency-domain solution is (numerically) zero.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& what, Complex denominator)
        : Error(what), denominator_(denominator) {}
    Complex denominator() const noexcept { return denominator_; }

private:
    Complex denominator_;
};

// Time integration or quadrature failed to reach the requested tolerance.
class IntegrationError : public Error {
public:
    using Error::Error;
};

} // namespace pbgfluor
