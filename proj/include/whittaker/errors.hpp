#pragma once

#include <stdexcept>
#include <string>

namespace wh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotUnipotent : public Error {
 public:
  using Error::Error;
};

class NotMirabolic : public Error {
 public:
  using Error::Error;
};

/// The spectral parameter is outside the open negative Weyl chamber, where the
/// Jacquet integral does not converge absolutely.
class ChamberViolation : public Error {
 public:
  using Error::Error;
};

/// A holomorphically extended section was evaluated at a point where one of
/// the bottom-right Gram minors left the right half plane.
class ContourError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wh
