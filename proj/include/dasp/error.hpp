#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dasp {

enum class ErrorKind {
  InvalidParameter,
  NonSymmetric,
  NonUnitDiagonal,
  NonPositiveDefinite,
  NonPositiveDiagonal,
  SingularCovariance,
  NumericalSingularity,
  RankDeficient,
  OutOfSupport,
  NonFiniteTarget,
  InsufficientDraws,
  EmptySubset,
  FoldFailure,
  MissingColumns,
  PairingMismatch,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures that come from the numerics rather than from bad input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dasp
