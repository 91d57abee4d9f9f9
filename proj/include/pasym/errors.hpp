#pragma once

#include <stdexcept>
#include <string>

namespace pasym {

// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (t <= 0, omega <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// nu_minus == nu_plus: no shock to speak of.
class DegenerateShockError : public Error {
public:
    using Error::Error;
};

// phi''(0) == 0 where a curvature is divided by.
class DegenerateFluxError : public Error {
public:
    using Error::Error;
};

// API misuse: mixed sides, mismatched grids, empty windows, too few records.
class UsageError : public Error {
public:
    using Error::Error;
};

// A recurrence entry was requested before its dependencies were built.
class SequencingError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

// Evaluation of an outer coefficient too close to its characteristic pole.
class PoleProximityError : public Error {
public:
    using Error::Error;
};

// A sampled field does not cover the support a computation needs.
class CoverageError : public Error {
public:
    using Error::Error;
};

// A time-marching scheme produced non-finite or runaway values.
class InstabilityError : public Error {
public:
    using Error::Error;
};

// Arguments so large that the integrand overflows even after rescaling.
class RangeError : public Error {
public:
    using Error::Error;
};

// The truncated computational domain is visibly influencing the solution.
class DomainTooSmallError : public Error {
public:
    using Error::Error;
};

// A property that holds by construction was observed to fail.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pasym
