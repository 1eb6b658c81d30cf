#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gprtfa {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes (2 for format/data/config, 3 for degenerate).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Structurally invalid input (bad option line, missing header).
class FormatError : public Error {
public:
  using Error::Error;
};

// Well-formed input carrying bad values. line() is 1-based, 0 if unknown.
class DataError : public Error {
public:
  explicit DataError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Parameters or shapes that violate an operation's preconditions.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Input that carries no usable signal (all-zero B-scan, empty FRD).
class DegenerateInputError : public Error {
public:
  using Error::Error;
};

} // namespace gprtfa
