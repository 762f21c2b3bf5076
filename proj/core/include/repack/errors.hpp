#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace repack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a structural precondition (unknown station, malformed
/// problem). Distinct from a "false"/"infeasible" answer.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The stations that must stay on air cannot be packed together.
class InfeasibleInstanceError : public Error {
 public:
  using Error::Error;
};

/// A search ran out of its node budget or the input is too large for an
/// exact method. Never replaced by an approximate answer.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Two computations that must agree did not (e.g. auction loss below the
/// optimum). Signals a bug in an oracle, not bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace repack
