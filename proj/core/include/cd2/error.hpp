#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cd2 {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or malformed input data (empty sets, bad indices,
/// unparsable files).
class InputError : public Error {
public:
    using Error::Error;
};

/// A file could not be parsed; carries the path and 1-based line number
/// (0 when the problem is not tied to a line).
class ParseError : public InputError {
public:
    ParseError(std::string path, std::size_t line, const std::string& what)
        : InputError(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          path_(std::move(path)),
          line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Experiment or loss configuration failed validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Optimization produced a non-finite loss or vertex coordinate.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace cd2
