#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace fresco {

/// Label -> unit-norm text embedding, all of one dimension. Embeddings are
/// computed elsewhere; this table only stores and compares them.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  /// Inserts or replaces a label. Throws DimensionMismatch on a wrong
  /// dimension and InvariantViolation when the norm is not 1 +- 1e-6.
  void insert(const std::string& label, std::vector<double> vector);

  bool contains(const std::string& label) const { return table_.contains(label); }
  /// Throws MissingEmbedding(label).
  const std::vector<double>& at(const std::string& label) const;
  /// Raw cosine in [-1, 1] between two stored labels.
  double cosine(const std::string& a, const std::string& b) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return table_.size(); }
  const std::map<std::string, std::vector<double>>& entries() const noexcept { return table_; }

  /// Format: header line `dim=D`, then `label<TAB>v1,v2,...,vD` per line.
  static EmbeddingTable read(std::istream& in);
  static EmbeddingTable read_file(const std::string& path);
  void write(std::ostream& out) const;

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> table_;
};

}  // namespace fresco
