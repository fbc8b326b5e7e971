#pragma once

#include <stdexcept>
#include <string>

namespace curv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An evaluation hit a point where a jet operation is undefined: division by a
/// jet with zero constant term, log/sqrt of a non-positive value, a pole of
/// tan, or a singular metric. Usually means a coordinate singularity.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// Jet order/dimension misuse or slot/valence mismatch in tensor algebra.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace curv
