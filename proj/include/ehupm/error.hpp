#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ehupm {

// Base of everything the engine throws. The C API maps each subclass onto a
// status code, so new error kinds must derive from one of these.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed fact text. Carries a 1-based source position.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column,
               const std::string& source = {})
        : Error((source.empty() ? "" : source + ":") + std::to_string(line) + ":" +
                std::to_string(column) + ": " + message),
          message_(message), line_(line), column_(column) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

// Well-formed input that violates a data or configuration invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ehupm
