#pragma once

#include <stdexcept>
#include <string>

namespace nfsusy {

// Every library error carries a stable machine code used by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("E_DOMAIN", what) {}
};

class NumericError : public Error {
 public:
  NumericError(const std::string& what, double bound)
      : Error("E_NUMERIC", what), bound_(bound) {}
  double achieved_bound() const noexcept { return bound_; }

 private:
  double bound_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error("E_PARAM", what) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what) : Error("E_GEOMETRY", what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error("E_RANGE", what) {}
};

class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error("E_STRUCTURE", what) {}
};

}  // namespace nfsusy
