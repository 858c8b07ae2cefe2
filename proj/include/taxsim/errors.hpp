#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taxsim {

/// Input rejected by a precondition check (bad schedule, negative base, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A metric is mathematically undefined for the given data (e.g. zero mean).
class UndefinedMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed text input. `line` is 1-based; 0 when not line oriented.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally well-formed data that violates a domain invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnreachableTarget : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File or stream could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace taxsim
