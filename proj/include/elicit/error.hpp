#pragma once

#include <stdexcept>
#include <string>

namespace elicit {

// Raised for runtime failures inside the library (I/O, numerical issues).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when inputs violate a documented precondition: malformed CSV,
// bad configuration, degenerate datasets. The CLI maps it to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace elicit
