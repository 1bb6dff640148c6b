#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace warpfield {

// Shape or binding mismatch between objects that must agree.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical self-check failed; carries the residuals that triggered it.
class DiagnosticError : public std::runtime_error {
 public:
  DiagnosticError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace warpfield
