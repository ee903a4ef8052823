#pragma once

#include <stdexcept>
#include <string>

namespace crowdspan {

// Base of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input record (bad JSON, wrong field types). Message names the line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that breaks a data invariant (duplicate id, bad offsets).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Inconsistent options: window sizes, split counts, config tables.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside a function's domain, e.g. bucketing a non-positive value.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace crowdspan
