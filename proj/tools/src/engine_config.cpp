#include "fresco/tools/engine_config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "fresco/error.hpp"

namespace fresco::tools {

namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& path, const std::string& base) {
  if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

void require_file(const std::string& path, const char* field) {
  if (!path.empty() && !fs::exists(path)) throw Error(Errc::InvalidConfig, field, "no such file: " + path);
}

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

EngineConfig EngineConfig::from_json(const nlohmann::json& j, const std::string& base_dir) {
  EngineConfig c;
  try {
    if (!j.is_object()) throw Error(Errc::InvalidConfig, "config", "expected an object");
    if (j.contains("thresholds")) {
      const auto& t = j["thresholds"];
      if (t.contains("band_proportions")) {
        const auto v = t["band_proportions"].get<std::vector<double>>();
        if (v.size() != 3) throw Error(Errc::InvalidConfig, "thresholds.band_proportions", "expected 3 values");
        c.thresholds.band_proportions = {v[0], v[1], v[2]};
      }
      c.thresholds.ellipse_factor = t.value("ellipse_factor", c.thresholds.ellipse_factor);
      c.thresholds.portrait_ratio = t.value("portrait_ratio", c.thresholds.portrait_ratio);
      if (t.contains("group_breaks")) c.thresholds.group_breaks = t["group_breaks"].get<std::vector<int>>();
    }
    if (j.contains("weights")) {
      const auto& w = j["weights"];
      c.weights.alpha = w.value("alpha", 1.0);
      c.weights.beta = w.value("beta", 1.0);
      c.weights.gamma = w.value("gamma", 1.0);
      if (w.contains("node_weights")) c.weights.node_weights = w["node_weights"].get<std::map<std::string, double>>();
    }
    auto path = [&](const char* key) {
      return j.contains(key) && !j[key].is_null() ? resolve(j[key].get<std::string>(), base_dir) : std::string();
    };
    c.registry_path = path("registry");
    c.synsets_path = path("synsets");
    c.embeddings_path = path("embeddings");
    c.ui_dir = path("ui_dir");
    if (j.contains("cache")) c.cache_path = path("cache");
    c.bind = j.value("bind", c.bind);
    if (j.contains("archives")) {
      for (const auto& a : j["archives"]) c.archives.push_back(resolve(a.get<std::string>(), base_dir));
    }
    c.export_max_instances = j.value("export_max_instances", c.export_max_instances);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, "config", e.what());
  }
  c.thresholds.validate();
  c.weights.validate();
  require_file(c.registry_path, "registry");
  require_file(c.synsets_path, "synsets");
  require_file(c.embeddings_path, "embeddings");
  for (const auto& a : c.archives) require_file(a, "archives");
  if (!parse_bind(c.bind)) throw Error(Errc::InvalidConfig, "bind", "expected host:port");
  // Parse the referenced files now so a bad file fails at load time.
  c.archive_config();
  return c;
}

EngineConfig EngineConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, path, "cannot open config");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::InvalidConfig, path, e.what());
  }
  return from_json(j, fs::path(path).parent_path().string());
}

nlohmann::ordered_json EngineConfig::to_json() const {
  nlohmann::ordered_json j;
  j["thresholds"] = {{"band_proportions", thresholds.band_proportions},
                     {"ellipse_factor", thresholds.ellipse_factor},
                     {"portrait_ratio", thresholds.portrait_ratio},
                     {"group_breaks", thresholds.group_breaks}};
  j["weights"] = {{"alpha", weights.alpha},
                  {"beta", weights.beta},
                  {"gamma", weights.gamma},
                  {"node_weights", weights.node_weights}};
  j["registry"] = registry_path;
  j["synsets"] = synsets_path;
  j["embeddings"] = embeddings_path;
  j["bind"] = bind;
  j["archives"] = archives;
  j["cache"] = cache_path;
  j["ui_dir"] = ui_dir;
  j["export_max_instances"] = export_max_instances;
  j["threads"] = threads;
  return j;
}

SynsetConfig EngineConfig::synsets() const {
  return synsets_path.empty() ? SynsetConfig::defaults() : SynsetConfig::load_file(synsets_path);
}

ArchiveConfig EngineConfig::archive_config() const {
  ArchiveConfig a;
  a.traits.thresholds = thresholds;
  const SynsetConfig s = synsets();
  auto person = s.concepts.find("person");
  if (person != s.concepts.end() && person->second.contains("object_detection")) {
    const auto& labels = person->second.at("object_detection");
    a.traits.person_labels = {labels.begin(), labels.end()};
  }
  if (!registry_path.empty()) a.registry = MeasureRegistry::load_file(registry_path);
  a.export_max_instances = export_max_instances;
  a.threads = threads;
  return a;
}

EmbeddingTable EngineConfig::embeddings() const {
  if (embeddings_path.empty()) throw Error(Errc::InvalidConfig, "embeddings", "no embedding table configured");
  return EmbeddingTable::read_file(embeddings_path);
}

std::optional<WeightConfig> parse_weights(const std::string& text) {
  WeightConfig w;
  double* slots[] = {&w.alpha, &w.beta, &w.gamma};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',', start);
    if ((i < 2) == (comma == std::string::npos)) return std::nullopt;
    const std::string_view part(text.data() + start, (i < 2 ? comma : text.size()) - start);
    if (!parse_double(part, *slots[i])) return std::nullopt;
    start = comma + 1;
  }
  try {
    w.validate();
  } catch (const Error&) {
    return std::nullopt;
  }
  return w;
}

std::optional<std::pair<std::string, int>> parse_bind(const std::string& text) {
  const std::size_t colon = text.rfind(':');
  const std::string host = colon == std::string::npos ? "127.0.0.1" : text.substr(0, colon);
  const std::string port_s = colon == std::string::npos ? text : text.substr(colon + 1);
  int port = 0;
  const auto [p, ec] = std::from_chars(port_s.data(), port_s.data() + port_s.size(), port);
  if (ec != std::errc() || p != port_s.data() + port_s.size() || port < 0 || port > 65535 || host.empty()) {
    return std::nullopt;
  }
  return std::pair{host, port};
}

}  // namespace fresco::tools
