#pragma once

#include <stdexcept>
#include <string>

namespace leocdn {

/// Error classes map one-to-one onto the CLI exit codes (config = 1, io = 2,
/// simulation = 3). Precondition violations on pure functions throw
/// std::invalid_argument and internal contract breaks std::logic_error.
enum class ErrorClass { Config = 1, Io = 2, Simulation = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }

private:
    ErrorClass cls_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorClass::Config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorClass::Io, what) {}
};

/// Malformed input file content. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(ErrorClass::Io, source + (line ? ":" + std::to_string(line) : std::string{}) +
                                    ": " + what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SimulationError : public Error {
public:
    explicit SimulationError(const std::string& what) : Error(ErrorClass::Simulation, what) {}
};

/// No satellite above the elevation mask for a ground site.
class CoverageGapError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class RoutingError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

/// Trace stream or metric series violates an ordering/shape contract.
class ValidationError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

}  // namespace leocdn
