#pragma once

#include <stdexcept>
#include <string>

namespace emdec {

/// Malformed configuration or pipeline wiring. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input data that violates an operation's preconditions. CLI exit code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical routine cannot proceed (rank deficiency, divergence). CLI exit code 4.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Too few usable spline knots; tells the sifting loop to stop extraction.
struct EnvelopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace emdec
