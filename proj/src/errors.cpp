#include "coopfront/errors.hpp"

namespace coop {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonNormalizable: return "NonNormalizable";
    case ErrorKind::DivergentMoment: return "DivergentMoment";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoFiniteThreshold: return "NoFiniteThreshold";
    case ErrorKind::TruncationUnstable: return "TruncationUnstable";
    case ErrorKind::WeightNotMonotone: return "WeightNotMonotone";
    case ErrorKind::ThinTailViolated: return "ThinTailViolated";
    case ErrorKind::FatTailViolatesJ1: return "FatTailViolatesJ1";
    case ErrorKind::StabilityViolated: return "StabilityViolated";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::NoRegime: return "NoRegime";
    case ErrorKind::UndecidedAtMidpoint: return "UndecidedAtMidpoint";
    case ErrorKind::Cancelled: return "Cancelled";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace coop
