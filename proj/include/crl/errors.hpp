#pragma once

#include <stdexcept>
#include <string>

namespace crl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symbol or participant does not belong to the interface it is used with.
class InterfaceMismatch : public Error {
 public:
  using Error::Error;
};

/// The inputs are well formed but violate an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A spec document or constructor argument is malformed (bad rows, bad indices).
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace crl
