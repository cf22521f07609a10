#pragma once

#include <stdexcept>
#include <string>

namespace cadpipe {

// Bad user input: malformed config, invalid CLI arguments, inconsistent
// model specifications. Maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad data: unparseable CSV, schema violations, integrity mismatches
// between pipeline stages. Maps to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class IntegrityError : public DataError {
 public:
  using DataError::DataError;
};

// A non-finite value showed up during a forward or backward pass.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, int layer)
      : std::runtime_error(what), layer_(layer) {}
  int layer() const { return layer_; }

 private:
  int layer_;
};

}  // namespace cadpipe
