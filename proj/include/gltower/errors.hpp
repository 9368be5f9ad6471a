#pragma once

#include <stdexcept>
#include <string>

namespace gltower {

// Every failure raised by the library derives from Error, so callers that only
// want a diagnostic can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidPair : public Error {
 public:
  using Error::Error;
};

class NotCoprime : public Error {
 public:
  using Error::Error;
};

class NotNilpotent : public Error {
 public:
  using Error::Error;
};

class ConstructionFailure : public Error {
 public:
  using Error::Error;
};

class NormalizationFailure : public Error {
 public:
  using Error::Error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class WellDefinednessFailure : public Error {
 public:
  using Error::Error;
};

class IntegrandNotInvariant : public Error {
 public:
  using Error::Error;
};

}  // namespace gltower
