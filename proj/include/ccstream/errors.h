#pragma once

#include <stdexcept>

namespace ccstream {

// Input exceeds a brute-force guard.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Estimator parameters that cannot produce a valid configuration.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file; the message carries the file and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed lines whose contents disagree with the declared shape (an
// embedding file whose size does not match its header).
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace ccstream
