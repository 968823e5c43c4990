#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gbfrft {

enum class ErrorKind {
  InvalidArgument,
  ShapeMismatch,
  DefectiveMatrix,
  SingularPower,
  SingularBlend,
  NonFinite,
  SizeCapExceeded,
  NonHermitianStatistics,
  DivergedLoss,
  ParseError,
  RaggedRows,
  ConstantSeries,
  SchemaMismatch,
  IoError,
};

constexpr std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorKind::SingularPower: return "SingularPower";
    case ErrorKind::SingularBlend: return "SingularBlend";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorKind::NonHermitianStatistics: return "NonHermitianStatistics";
    case ErrorKind::DivergedLoss: return "DivergedLoss";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::ConstantSeries: return "ConstantSeries";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Library exception. `kind()` is the stable, machine-readable error class
/// printed by the CLI on failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace gbfrft
