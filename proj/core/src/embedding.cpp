#include "fresco/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "fresco/error.hpp"
#include "fresco/format.hpp"

namespace fresco {

void EmbeddingTable::insert(const std::string& label, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw Error(Errc::DimensionMismatch, label,
                "expected dimension " + std::to_string(dim_) + ", got " + std::to_string(vector.size()));
  }
  double norm2 = 0.0;
  for (double x : vector) norm2 += x * x;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) throw Error(Errc::InvariantViolation, label, "embedding is not unit norm");
  table_[label] = std::move(vector);
}

const std::vector<double>& EmbeddingTable::at(const std::string& label) const {
  auto it = table_.find(label);
  if (it == table_.end()) throw Error(Errc::MissingEmbedding, label);
  return it->second;
}

double EmbeddingTable::cosine(const std::string& a, const std::string& b) const {
  const auto& va = at(a);
  const auto& vb = at(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    dot += va[i] * vb[i];
    na += va[i] * va[i];
    nb += vb[i] * vb[i];
  }
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

EmbeddingTable EmbeddingTable::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim=", 0) != 0) {
    throw Error(Errc::MalformedRecord, "embedding header", "expected `dim=D` on the first line");
  }
  std::size_t dim = 0;
  auto [p, ec] = std::from_chars(line.data() + 4, line.data() + line.size(), dim);
  if (ec != std::errc{} || dim == 0) throw Error(Errc::MalformedRecord, "embedding header", "bad dimension");
  EmbeddingTable table(dim);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(Errc::MalformedRecord, "embedding line " + std::to_string(line_no), "missing TAB separator");
    }
    std::string label = line.substr(0, tab);
    std::vector<double> values;
    values.reserve(dim);
    const char* cur = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    while (cur < end) {
      double v = 0.0;
      auto [next, err] = std::from_chars(cur, end, v);
      if (err != std::errc{}) throw Error(Errc::MalformedRecord, label, "bad number in embedding");
      values.push_back(v);
      cur = next;
      if (cur < end) {
        if (*cur != ',') throw Error(Errc::MalformedRecord, label, "expected ',' between components");
        ++cur;
      }
    }
    table.insert(label, std::move(values));
  }
  return table;
}

EmbeddingTable EmbeddingTable::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, path, "cannot open embedding table");
  return read(in);
}

void EmbeddingTable::write(std::ostream& out) const {
  out << "dim=" << dim_ << '\n';
  for (const auto& [label, vec] : table_) {
    out << label << '\t';
    for (std::size_t i = 0; i < vec.size(); ++i) {
      if (i) out << ',';
      out << format_double(vec[i]);
    }
    out << '\n';
  }
}

}  // namespace fresco
