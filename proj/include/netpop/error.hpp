#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netpop {

enum class ErrorCode {
  NonSymmetric,
  NonBinaryEntry,
  NonZeroDiagonal,
  NonSquare,
  SpaceTooLarge,
  InvalidSpec,
  EmptyPopulation,
  SizeMismatch,
  EigDecompositionFailure,
  DomainError,
  InternalInconsistency,
  StepTooLarge,
  InvalidConfig,
  NonFiniteLogRatio,
  EmptyTrace,
  IndivisiblePopulation,
  TooFewObservations,
  ParseError,
  SchemaError,
  UnknownKey,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. `code()` identifies the failure class so callers
/// (the CLI in particular) can map it to an exit status without parsing text.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for errors caused by bad input rather than a failed computation.
  bool is_validation() const noexcept;

private:
  ErrorCode code_;
};

}  // namespace netpop
