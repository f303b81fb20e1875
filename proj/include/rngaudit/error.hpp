#pragma once

#include <stdexcept>
#include <string>

namespace rngaudit {

// Base class for every error the library reports. The CLI maps the concrete
// subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters, descriptors or precondition violations by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A mathematical domain violation (negative chi-square argument, zero
// variance, singular basis, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rngaudit
