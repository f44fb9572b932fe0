#pragma once

#include <stdexcept>
#include <string>

namespace coop {

enum class ErrorKind {
  InvalidArgument,
  NonNormalizable,
  DivergentMoment,
  GridMismatch,
  GridTooCoarse,
  NoConvergence,
  NoFiniteThreshold,
  TruncationUnstable,
  WeightNotMonotone,
  ThinTailViolated,
  FatTailViolatesJ1,
  StabilityViolated,
  InsufficientHistory,
  NoRegime,
  UndecidedAtMidpoint,
  Cancelled,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace coop
