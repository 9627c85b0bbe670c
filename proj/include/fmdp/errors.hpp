#pragma once

#include <stdexcept>
#include <string>

namespace fmdp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed factored structure: bad sizes, scopes, table shapes, indices.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Operation not available in the current reward mode.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// Numeric parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Observed data outside the range the model allows.
class DataError : public Error {
 public:
  using Error::Error;
};

/// step() called after the horizon was reached.
class EpisodeCompleteError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant did not hold (e.g. LCB above UCB).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration or environment spec string.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure to read or write a file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fmdp
