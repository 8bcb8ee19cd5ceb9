#include "fresco/error.hpp"

namespace fresco {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::ZeroDimension: return "ZeroDimension";
    case Errc::BinMismatch: return "BinMismatch";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::EmptyPalette: return "EmptyPalette";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::RegistryMismatch: return "RegistryMismatch";
    case Errc::UnknownMeasure: return "UnknownMeasure";
    case Errc::UnknownImage: return "UnknownImage";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::EmptyArchive: return "EmptyArchive";
    case Errc::MissingEmbedding: return "MissingEmbedding";
    case Errc::IoFailure: return "IoFailure";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string compose(Errc code, const std::string& subject, const std::string& detail) {
  std::string msg(to_string(code));
  msg += "(" + subject + ")";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(Errc code, std::string subject, const std::string& detail)
    : std::runtime_error(compose(code, subject, detail)), code_(code), subject_(std::move(subject)) {}

}  // namespace fresco
