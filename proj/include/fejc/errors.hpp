#pragma once

#include <stdexcept>
#include <string>

namespace fejc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical parameters outside the model's domain of validity.
class PhysicsError : public Error {
public:
    using Error::Error;
};

/// Momentum grid or Fock-space construction failed.
class GridError : public Error {
public:
    using Error::Error;
};

/// A state or operator was applied on a basis it was not built for.
class BasisError : public Error {
public:
    using Error::Error;
};

/// The rotating-wave reduction was requested but the detuning criterion fails.
class CriterionError : public Error {
public:
    using Error::Error;
};

/// Adaptive integration could not meet its accuracy or health limits.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Dense materialization requested for a basis larger than the guard.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Configuration file violated the schema or was inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace fejc
