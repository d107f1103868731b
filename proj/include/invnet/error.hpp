#pragma once

#include <stdexcept>
#include <string>

namespace invnet {

// Exception hierarchy. The CLI maps each kind onto a process exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shapes that do not line up (vector lengths, matrix sizes, model vs data).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Invalid arguments or malformed user data.
class InputError : public Error {
public:
    using Error::Error;
};

// Malformed file contents; carries the offending location in the message.
class ParseError : public InputError {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column,
               const std::string& what)
        : InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                     what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Numerically degenerate situations: zero normals, zero-variance signals.
class DegenerateError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace invnet
