#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mubex {

enum class Errc {
  CompositeDimension,
  UnsupportedDimension,
  IndexOutOfRange,
  ZeroOperand,
  DimensionMismatch,
  NotHermitian,
  NoConvergence,
  InconsistentRows,
  NotAState,
  MissingBasis,
  InvalidArgument,
  Parse,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::CompositeDimension: return "CompositeDimension";
    case Errc::UnsupportedDimension: return "UnsupportedDimension";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ZeroOperand: return "ZeroOperand";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::InconsistentRows: return "InconsistentRows";
    case Errc::NotAState: return "NotAState";
    case Errc::MissingBasis: return "MissingBasis";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

/// Exception type thrown by every mubex operation. The code identifies the
/// failure class; what() carries a human readable message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mubex
