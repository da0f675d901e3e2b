#pragma once

#include <stdexcept>
#include <string>

namespace z2lat {

/// Domain failures raised by the library. The CLI turns these into a JSON
/// payload naming the kind.
enum class ErrorKind {
  InvalidInput,
  NonSquare,
  DimensionMismatch,
  SingularMatrix,
  DegenerateForm,
  UnsupportedIndefinite,
  NotEven,
  PullbackMismatch,
  GlueIncompatible,
  IncompatibleCokernels,
  TooLarge,
  BadRank,
  ForbiddenBlock,
  NotUnimodular,
  NotOdd,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::UnsupportedIndefinite: return "UnsupportedIndefinite";
    case ErrorKind::NotEven: return "NotEven";
    case ErrorKind::PullbackMismatch: return "PullbackMismatch";
    case ErrorKind::GlueIncompatible: return "GlueIncompatible";
    case ErrorKind::IncompatibleCokernels: return "IncompatibleCokernels";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadRank: return "BadRank";
    case ErrorKind::ForbiddenBlock: return "ForbiddenBlock";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::NotOdd: return "NotOdd";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace z2lat
