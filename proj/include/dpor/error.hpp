#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpor {

// Maps directly onto the CLI exit codes (1 usage, 2 data, 3 numerical).
enum class ErrorKind { usage = 1, data = 2, numerical = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// Parse failure tied to a physical input line (1-based).
class ParseError : public DataError {
public:
    ParseError(std::size_t line, std::string field, const std::string& message)
        : DataError("line " + std::to_string(line) + ": " + field + ": " + message),
          line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

}  // namespace dpor
