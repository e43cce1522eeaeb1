#pragma once

#include <stdexcept>
#include <string>

namespace adequacy {

/// Base of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: empty lists, out-of-range parameters, malformed files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a meaningful answer
/// (non-estimable density, degenerate fit, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace adequacy
