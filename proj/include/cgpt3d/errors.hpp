#pragma once

#include <stdexcept>
#include <string>

namespace cgpt3d {

/// Bad input: violated preconditions, malformed parameters or files that
/// parse but break a mesh invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical step failed (singular block, rank deficiency, residual check).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cgpt3d
