#pragma once

#include <stdexcept>
#include <string>

namespace qhsmm {

/// Classifies every error the library can raise. The CLI maps kinds to
/// exit codes, so the set is part of the public contract.
enum class ErrorKind {
  invalid_argument,   // bad parameter value (nonpositive time, tolerance out of range, ...)
  index,              // mode/symbol/transition index out of range
  structure,          // model graph defect (e.g. not strongly connected)
  domain,             // request outside the mathematical domain (symbol never emitted, ...)
  divergence,         // a quantity that must be finite is not
  unreachable_state,  // causal pair past its survival support
  shape,              // dimension mismatch between operands
  resolution,         // grid step too coarse for the model
  resource,           // configured resource guard exceeded
  parse,              // malformed input file
  consistency,        // data inconsistent with the model (trajectory replay failure)
  insufficient_data,  // not enough points for a fit / empty input
  solver,             // numerical solver failure
  io                  // filesystem failure
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::index: return "index error";
    case ErrorKind::structure: return "structure error";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::divergence: return "divergence error";
    case ErrorKind::unreachable_state: return "unreachable state";
    case ErrorKind::shape: return "shape error";
    case ErrorKind::resolution: return "resolution error";
    case ErrorKind::resource: return "resource guard exceeded";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::consistency: return "consistency error";
    case ErrorKind::insufficient_data: return "insufficient data";
    case ErrorKind::solver: return "solver error";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

}  // namespace qhsmm
