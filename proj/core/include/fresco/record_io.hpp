#pragma once

// Line-delimited JSON archive format: one ImageRecord object per line.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fresco/annotation.hpp"

namespace fresco {

/// Parses one archive line. Throws Error with MalformedRecord (syntax),
/// SchemaViolation (missing or mistyped field) or InvariantViolation
/// (structural invariant broken, e.g. an unnormalized histogram). Range
/// problems are left to validate_archive.
ImageRecord parse_record(std::string_view text, const SchemaConfig& schema = {});

ImageRecord record_from_json(const nlohmann::json& j, const SchemaConfig& schema = {});
nlohmann::ordered_json record_to_json(const ImageRecord& record);

/// Compact single-line serialization with a stable field order.
std::string serialize_record(const ImageRecord& record);

/// Reads every non-blank line. Line numbers (1-based) are added to error details.
std::vector<ImageRecord> read_archive(std::istream& in, const SchemaConfig& schema = {});
std::vector<ImageRecord> read_archive_file(const std::string& path, const SchemaConfig& schema = {});
void write_archive(std::ostream& out, const std::vector<ImageRecord>& records);

}  // namespace fresco
