#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Bad command-line style input: unknown parameter override, malformed
/// option value.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Evaluation outside a function's domain, an unbound parameter, a
/// non-divisible deflation, or a precondition on the input geometry.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A singular point outside the non-degenerate theory (dλ = 0, rank 0, ...).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Iterations that failed to converge.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace frontlab
