#pragma once

#include <stdexcept>
#include <string>

namespace gsparse {

/// Raised for invalid input data, bad arguments and violated preconditions.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
  using Error::Error;
};

} // namespace gsparse
