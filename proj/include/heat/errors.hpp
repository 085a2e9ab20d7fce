#pragma once

#include <stdexcept>
#include <string>

namespace heat {

// Bad flags or inconsistent configuration; CLI exit status 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data; CLI exit status 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values or other numeric failure; CLI exit status 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace heat
