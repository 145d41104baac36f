#pragma once

#include <stdexcept>
#include <string>

namespace sstb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (bad column count, unparsable token).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Data that parses but violates an invariant (non-finite value, shape mismatch, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Invalid combination of parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sstb
