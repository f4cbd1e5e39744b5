#pragma once

#include <stdexcept>
#include <string>

namespace slowlight {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument sits on (or within tolerance of) a pole of the gamma function.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Argument outside the supported evaluation domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A denominator vanished where the formula needs it finite.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Numerical integration drifted off the unit sphere.
class NormDriftError : public Error {
public:
    using Error::Error;
};

/// Inconsistent solver input (grid/boundary sizes and the like).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Unknown or ill-typed key in a scenario document. `path()` is dotted.
class SchemaError : public ConfigError {
public:
    SchemaError(std::string path, const std::string& what)
        : ConfigError(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// A scenario parsed fine but violates a physical invariant.
class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace slowlight
