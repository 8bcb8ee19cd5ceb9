#pragma once

// Cross-model agreement over an archive: how often each annotation task
// reports a concept (people), how group sizes distribute under each counting
// task, and how far the label vocabularies of two tasks overlap once
// near-synonyms are merged through text-embedding similarity.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fresco/annotation.hpp"
#include "fresco/embedding.hpp"
#include "fresco/traits.hpp"

namespace fresco {

enum class Task { FaceDetection, ObjectDetection, Panoptic, Semantic, Tagging, Captioning };

inline constexpr Task kTasks[] = {Task::FaceDetection, Task::ObjectDetection, Task::Panoptic,
                                  Task::Semantic,      Task::Tagging,         Task::Captioning};

std::string to_string(Task t);
/// Accepts the long names (object_detection) and the short ones used in
/// task pairs (faces, objects, panoptic, semantic, tags, captions).
std::optional<Task> task_from_string(std::string_view s);
/// Short name used in pair keys: "tags", "objects", ...
std::string short_name(Task t);

/// Tasks that report instance counts, not presence only.
bool is_counting(Task t);

/// Concept -> task name -> labels. For captioning the labels are trigger
/// phrases matched case-insensitively as substrings of the caption text.
struct SynsetConfig {
  std::map<std::string, std::map<std::string, std::vector<std::string>>> concepts;

  /// Throws InvalidConfig on an empty label list or an unknown task name.
  void validate() const;
  /// Throws UnknownTask when the concept has no labels for the task.
  const std::vector<std::string>& labels(std::string_view concept_name, Task task) const;

  static SynsetConfig defaults();
  static SynsetConfig from_json(const nlohmann::json& j);
  static SynsetConfig load_file(const std::string& path);
  nlohmann::ordered_json to_json() const;
};

/// Occurrences of the concept in one record under one task. Presence-only
/// tasks return 0 or 1.
int concept_count(const ImageRecord& record, const SynsetConfig& synsets, Task task,
                  std::string_view concept_name = "person");

struct PresenceResult {
  Task task = Task::FaceDetection;
  std::size_t images = 0;
  std::size_t with_concept = 0;
  double fraction = 0.0;
  std::optional<double> mean_count;  // counting tasks only
};

/// Throws EmptyArchive on no records and UnknownTask when the synset does not
/// cover the task.
PresenceResult people_presence(std::span<const ImageRecord> records, const SynsetConfig& synsets, Task task,
                               std::string_view concept_name = "person");

inline constexpr std::size_t kGroupCategories = 6;

struct GroupDistribution {
  Task task = Task::FaceDetection;
  std::size_t images_with_people = 0;
  std::array<std::size_t, kGroupCategories> counts{};
  std::array<double, kGroupCategories> fractions{};  // all zero when no image has people
};

/// Group sizes over the images where the task sees at least one person.
/// Throws UnknownTask for presence-only tasks and EmptyArchive on no records.
GroupDistribution group_distribution(std::span<const ImageRecord> records, const SynsetConfig& synsets, Task task,
                                     const ThresholdConfig& cfg = {}, std::string_view concept_name = "person");

struct TopicOverlap {
  std::size_t first_only = 0;
  std::size_t common = 0;
  std::size_t second_only = 0;

  bool operator==(const TopicOverlap&) const = default;
};

/// Greedy one-to-one matching of labels by descending cosine over pairs with
/// similarity >= tau; equal similarities are taken in lexicographic order of
/// (label_a, label_b). Identical labels have similarity 1. Duplicates in the
/// inputs are ignored. Throws MissingEmbedding(label).
TopicOverlap topic_overlap(std::vector<std::string> labels_a, std::vector<std::string> labels_b,
                           const EmbeddingTable& emb, double tau);

/// Sorted distinct labels a record carries for a vocabulary task: tags,
/// object categories, semantic classes with positive coverage, panoptic
/// thing labels. Throws UnknownTask for tasks without a label vocabulary.
std::vector<std::string> task_labels(const ImageRecord& record, Task task);

/// "tags-objects" -> (Tagging, ObjectDetection). Throws UnknownTask.
std::pair<Task, Task> parse_task_pair(std::string_view pair);

inline constexpr std::array<double, 3> kDefaultOverlapThresholds{0.80, 0.85, 0.90};

struct OverlapRow {
  double tau = 0.0;
  TopicOverlap totals;
  double in_first = 0.0;
  double in_common = 0.0;
  double in_second = 0.0;
};

struct OverlapReport {
  Task first = Task::Tagging;
  Task second = Task::ObjectDetection;
  std::size_t images = 0;
  std::vector<OverlapRow> rows;  // one per threshold, in the given order
};

/// Per-image topic_overlap summed over the archive, then turned into
/// fractions of the summed topic count. A row with no topics at all counts
/// as fully common.
OverlapReport overlap_report(std::span<const ImageRecord> records, Task first, Task second,
                             const EmbeddingTable& emb,
                             std::span<const double> thresholds = kDefaultOverlapThresholds);

std::string presence_to_csv(std::span<const PresenceResult> rows);
std::string presence_to_text(std::span<const PresenceResult> rows);
std::string groups_to_csv(std::span<const GroupDistribution> rows);
std::string groups_to_text(std::span<const GroupDistribution> rows);
std::string overlap_to_csv(std::span<const OverlapReport> reports);
std::string overlap_to_text(std::span<const OverlapReport> reports);

}  // namespace fresco
