#pragma once

#include <stdexcept>

namespace fsep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Height span requested for a ring that is not half filled.
class UndefinedDelta : public Error {
 public:
  using Error::Error;
};

/// Target sequence is not a rotation of any substitution image.
class NotInImage : public Error {
 public:
  using Error::Error;
};

/// A configured size or iteration cap was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

}  // namespace fsep
