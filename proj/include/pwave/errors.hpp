#pragma once

#include <stdexcept>
#include <string>

namespace pwave {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Query outside a table's domain or range; carries the violated bound.
struct OutOfRange : Error {
  OutOfRange(const std::string& what, double value, double bound)
      : Error(what), value(value), bound(bound) {}
  double value;
  double bound;
};

struct BracketError : Error {
  using Error::Error;
};

struct ResolutionError : Error {
  using Error::Error;
};

struct NoTurningPoint : Error {
  using Error::Error;
};

// Field intensity too low for the requested ionization stage.
struct BelowThreshold : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace pwave
