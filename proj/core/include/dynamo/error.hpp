#pragma once

#include <stdexcept>
#include <string>

namespace dynamo {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  NotAnInvolution,
  ZeroVector,
  DegenerateInput,
  NotOnCone,
  ApexPoint,
  ProfileVanishes,
  NonFiniteInput,
  NonConvergence,
  NotDefective,
  IllConditioned,
  NoSignChange,
  LostBracket,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dynamo
