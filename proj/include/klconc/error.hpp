#pragma once

#include <stdexcept>
#include <string>

namespace klconc {

// Malformed input: bad weights, lengths, out-of-range parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but outside the regime a result is stated for
// (e.g. the variance lower bound below n = 10k).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace klconc
