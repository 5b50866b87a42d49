#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsurf {

/// Base of every domain error thrown by the library. `kind()` is a stable
/// identifier used in structured error output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : Error("parse_error", "line " + std::to_string(line) + ", column " +
                                 std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class GluingError : public Error {
 public:
  explicit GluingError(const std::string& msg) : Error("invalid_gluing", msg) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error("dimension_mismatch", msg) {}
};

class InconsistentWeightsError : public Error {
 public:
  explicit InconsistentWeightsError(const std::string& msg)
      : Error("inconsistent_weights", msg) {}
};

class IncompatibleError : public Error {
 public:
  IncompatibleError(std::size_t tet, const std::string& msg)
      : Error("incompatible", msg), tet_(tet) {}
  std::size_t tet() const noexcept { return tet_; }

 private:
  std::size_t tet_;
};

class AdmissibilityError : public Error {
 public:
  explicit AdmissibilityError(const std::string& msg) : Error("not_admissible", msg) {}
};

class GuardError : public Error {
 public:
  explicit GuardError(const std::string& msg) : Error("guard_exceeded", msg) {}
};

class PreconditionError : public Error {
 public:
  PreconditionError(std::string kind, const std::string& msg) : Error(std::move(kind), msg) {}
};

class SlopeError : public Error {
 public:
  SlopeError(std::string kind, const std::string& msg) : Error(std::move(kind), msg) {}
};

class MorseError : public Error {
 public:
  MorseError(std::string kind, const std::string& msg) : Error(std::move(kind), msg) {}
};

}  // namespace nsurf
