#pragma once

#include <stdexcept>
#include <string>

namespace starhilb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeNotFactorable : public Error {
 public:
  using Error::Error;
};

class NotOrthonormal : public Error {
 public:
  using Error::Error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

/// A sweep grid that is too short or not strictly increasing.
class InvalidSweep : public Error {
 public:
  using Error::Error;
};

class ResidualNaN : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration; the message names the offending key.
class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace starhilb
