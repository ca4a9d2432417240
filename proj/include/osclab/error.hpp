#pragma once

#include <stdexcept>
#include <string>

namespace osclab {

enum class ErrorKind {
  domain,               // cube or cell outside the grid
  degenerate_measure,   // zero-mass cube where a positive mass is required
  non_doubling,         // zero-mass cube inside a positive-mass ancestor
  resolution,           // no admissible sub-box at this resolution
  overflow_range,       // bracket cap exceeded / non-finite evaluation
  malformed_young,      // candidate Young function violates its axioms
  parameter,            // invalid numeric parameter
  functional,           // cube functional not positive / incompatible
  stopping_precondition,
  infeasible,
  growth_too_fast,
  io,
  parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by subcube_alpha; carries the best fraction found.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double best_alpha)
      : Error(ErrorKind::resolution, what), best_alpha_(best_alpha) {}

  double best_alpha() const noexcept { return best_alpha_; }

 private:
  double best_alpha_;
};

/// Raised by the CSV reader with the offending 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::parse, what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace osclab
