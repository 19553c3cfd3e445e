#pragma once

#include <stdexcept>
#include <string>

namespace acbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (out-of-range parameter,
/// mismatched sizes, malformed configuration).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The input is well-formed but carries no information the operation can
/// work with (all-zero signal, zero-power reference).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A file or serialized blob could not be parsed or uses an unsupported
/// encoding.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to converge or diverged.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Wraps an error raised inside the experiment pipeline with the name of the
/// stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what);
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace acbench
