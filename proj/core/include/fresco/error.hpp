#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fresco {

enum class Errc {
  MalformedRecord,
  SchemaViolation,
  InvariantViolation,
  DuplicateId,
  ZeroDimension,
  BinMismatch,
  NotNormalized,
  EmptyPalette,
  DimensionMismatch,
  ZeroVector,
  DegenerateRange,
  RegistryMismatch,
  UnknownMeasure,
  UnknownImage,
  UnknownTask,
  EmptyArchive,
  MissingEmbedding,
  IoFailure,
  InvalidConfig,
};

std::string_view to_string(Errc code);

/// Error raised by every fallible engine operation. `subject()` names the
/// offending field, measure path, label or image id, whichever applies.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string subject, const std::string& detail = {});

  Errc code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  Errc code_;
  std::string subject_;
};

}  // namespace fresco
