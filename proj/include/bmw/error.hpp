#pragma once

#include <stdexcept>
#include <string>

namespace bmw {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document or word.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A presentation that violates the link condition or a structural rule.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured resource bound (enumeration size, ball size, budget) was hit.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace bmw
