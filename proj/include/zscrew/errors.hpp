#pragma once

#include <stdexcept>
#include <string>

namespace zscrew {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Argument beyond what the supplied data (prime table, zero table) covers.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A series or quadrature could not reach the requested accuracy.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data.  `line` is 1-based, 0 if unknown.
class DataError : public Error {
 public:
  DataError(const std::string& what, long line = 0) : Error(what), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace zscrew
