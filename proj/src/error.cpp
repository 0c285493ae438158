#include "dasp/error.hpp"

namespace dasp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NonUnitDiagonal: return "NonUnitDiagonal";
    case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorKind::NonPositiveDiagonal: return "NonPositiveDiagonal";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::NumericalSingularity: return "NumericalSingularity";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::OutOfSupport: return "OutOfSupport";
    case ErrorKind::NonFiniteTarget: return "NonFiniteTarget";
    case ErrorKind::InsufficientDraws: return "InsufficientDraws";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::FoldFailure: return "FoldFailure";
    case ErrorKind::MissingColumns: return "MissingColumns";
    case ErrorKind::PairingMismatch: return "PairingMismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveDefinite:
    case ErrorKind::NonPositiveDiagonal:
    case ErrorKind::SingularCovariance:
    case ErrorKind::NumericalSingularity:
    case ErrorKind::RankDeficient:
    case ErrorKind::NonFiniteTarget:
    case ErrorKind::FoldFailure:
      return true;
    default:
      return false;
  }
}

}  // namespace dasp
