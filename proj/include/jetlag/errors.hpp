#pragma once

#include <stdexcept>
#include <string>

namespace jetlag {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad dimensions, indices, orders, tolerances.
struct ConfigError : Error {
  using Error::Error;
};

// Evaluation hit a point outside a function's domain: log of a nonpositive
// value, division by a jet with zero constant term, singular metric.
struct SingularPointError : Error {
  using Error::Error;
};

// Expression or model text failed to parse; carries a source location
// (1-based line and column).
struct ParseError : Error {
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg), line(line_), col(col_) {}
  int line = 0;
  int col = 0;
};

// Model-level validation failure: symmetry conflict, autonomy violation,
// degenerate metric at a probe point.
struct ModelError : Error {
  using Error::Error;
};

}  // namespace jetlag
