#pragma once

#include <stdexcept>
#include <string>

namespace irbench {

/// Raised for malformed or inconsistent input data (bad records, dimension
/// mismatches, unknown fields). The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition of an operation.
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace irbench
