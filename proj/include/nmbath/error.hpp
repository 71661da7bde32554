// error.hpp: exception types shared by every nmbath module

#pragma once

#include <stdexcept>
#include <string>

namespace nmbath {

// Base for all numeric/precondition failures (CLI exit code 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on the inputs was violated (M = 1, kappa <= 0, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// The requested integral is infinite (non square-integrable coupling).
class DivergentError : public Error {
public:
    using Error::Error;
};

// The memory kernel is a delta function; no regular kernel exists.
class MarkovianKernelError : public Error {
public:
    using Error::Error;
};

// Orthogonal-polynomial recurrence broke down (measure has too few support points).
class BreakdownError : public Error {
public:
    using Error::Error;
};

// Joint Hilbert space exceeds the configured dimension cap.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Malformed experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nmbath
