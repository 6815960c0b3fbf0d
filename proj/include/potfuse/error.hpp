#pragma once

#include <stdexcept>
#include <string>

namespace potfuse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or malformed data supplied by the caller.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A trainer could not produce a usable hyperplane (single class, zero normal, divergence).
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// A density model could not be fitted on a bag (e.g. a class is missing).
class FitError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant. Seeing one of these is a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace potfuse
