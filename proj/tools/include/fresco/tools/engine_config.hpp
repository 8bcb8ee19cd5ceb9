#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fresco/archive.hpp"
#include "fresco/consistency.hpp"
#include "fresco/embedding.hpp"
#include "fresco/scoring.hpp"
#include "fresco/traits.hpp"

namespace fresco::tools {

/// Engine settings shared by the CLI and the service. Relative paths in a
/// config file are resolved against the file's directory.
struct EngineConfig {
  ThresholdConfig thresholds;
  WeightConfig weights;
  std::string registry_path;    // empty: built-in registry
  std::string synsets_path;     // empty: built-in synsets
  std::string embeddings_path;  // label embeddings for topic overlap
  std::string bind = "127.0.0.1:8080";
  std::vector<std::string> archives;
  std::string cache_path = "fresco-cache.jsonl";
  std::string ui_dir;  // static files served at / when set
  std::size_t export_max_instances = 8;
  std::size_t threads = 0;

  /// Throws InvalidConfig when a field is mistyped or a referenced file
  /// does not exist.
  static EngineConfig from_json(const nlohmann::json& j, const std::string& base_dir = {});
  static EngineConfig load_file(const std::string& path);
  nlohmann::ordered_json to_json() const;

  /// Registry, synsets and thresholds resolved into an ArchiveConfig. Person
  /// labels come from the synset's object-detection list for "person".
  ArchiveConfig archive_config() const;
  SynsetConfig synsets() const;
  /// Throws InvalidConfig when no embeddings path is configured.
  EmbeddingTable embeddings() const;
};

/// Parses "a,b,g". Returns nullopt on anything else.
std::optional<WeightConfig> parse_weights(const std::string& text);

/// Splits "host:port"; a bare port binds to 127.0.0.1.
std::optional<std::pair<std::string, int>> parse_bind(const std::string& text);

}  // namespace fresco::tools
