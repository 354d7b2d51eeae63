#pragma once

#include <stdexcept>
#include <string>

namespace ousector {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible or non-square dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Drift matrix has an eigenvalue with real part >= -1e-12.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Matrix expected symmetric positive definite is not.
class DefinitenessError : public Error {
public:
    using Error::Error;
};

/// Scalar argument outside its admissible range (t <= 0, p <= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Linear system or Gram matrix too ill-conditioned to proceed.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// A user-supplied oracle produced a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A construction-time cross-check failed (gradient vs finite
/// differences, convexity spot-check, algebraic invariant).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Configuration text could not be parsed or is inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Report files could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ousector
