#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

// Base for recoverable numeric failures; the CLI maps these to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BracketFailure : NumericError {
  explicit BracketFailure(const std::string& msg) : NumericError("BracketFailure: " + msg) {}
};

struct RadiusExceeded : NumericError {
  explicit RadiusExceeded(const std::string& msg) : NumericError("RadiusExceeded: " + msg) {}
};

struct InconclusiveClassification : NumericError {
  explicit InconclusiveClassification(const std::string& msg)
      : NumericError("Inconclusive: " + msg) {}
};

}  // namespace dyadic
