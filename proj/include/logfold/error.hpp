#pragma once

#include <stdexcept>
#include <string>

namespace logfold {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Missing or malformed columns, duplicate edges, bad JSON shapes.
class SchemaError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyLogError : public Error {
public:
    using Error::Error;
};

/// Networks or nets without enough structure to run the requested algorithm.
class DegenerateError : public Error {
public:
    using Error::Error;
};

class ConsistencyError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NotApplicableError : public Error {
public:
    using Error::Error;
};

/// Raised by the experiment harness: the failing pipeline stage plus the
/// message of the underlying error.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& msg)
        : Error(stage + ": " + msg), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace logfold
