#pragma once

#include <stdexcept>
#include <string>

namespace globalwalk {

/// Base for all recoverable failures raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list or label input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Malformed embedding or config file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (bad index, value out of domain).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw ContractViolation(what);
}

}  // namespace globalwalk
