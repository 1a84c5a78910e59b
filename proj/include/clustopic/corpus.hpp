/* Copyright 2026 The clustopic Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clustopic/assignment.hpp"

namespace clustopic {

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> gold_label;
};

/// Ordered, id-unique collection of documents. Row i of every downstream
/// matrix refers to documents()[i].
class Corpus {
 public:
  explicit Corpus(std::vector<Document> documents);

  std::size_t size() const noexcept { return documents_.size(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }
  std::span<const Document> documents() const noexcept { return documents_; }
  std::vector<std::string> ids() const;

  /// True when every document carries a gold label.
  bool has_gold_labels() const noexcept;
  std::vector<std::string> gold_labels() const;

 private:
  std::vector<Document> documents_;
};

enum class CorpusFormat { jsonl, plain_dir };

CorpusFormat parse_corpus_format(std::string_view name);

/// jsonl: one object per line with string fields id, text and optional label.
/// Blank lines are skipped. plain_dir: every regular file is a document whose
/// id is its filename; files are taken in lexicographic filename order.
Corpus ingest_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus parse_jsonl(std::istream& in);

struct TokenizerConfig {
  bool lowercase = true;
  std::size_t min_length = 2;  // in code points
  std::size_t min_count = 1;   // vocabulary floor on corpus-wide occurrences
};

/// Splits on every ASCII character that is not a letter or digit. Bytes of
/// multi-byte UTF-8 sequences are kept as token characters.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config = {});

/// Sorted set of distinct terms; column id of a term is its rank.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws Error(validation) unless terms are strictly ascending.
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const noexcept { return terms_.size(); }
  const std::string& operator[](std::size_t i) const { return terms_[i]; }
  std::span<const std::string> terms() const noexcept { return terms_; }
  std::optional<std::size_t> index_of(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
};

enum class RowKind { per_document, per_cluster };

struct CountEntry {
  std::uint32_t term;
  std::uint64_t count;
};

/// Sparse (CSR) matrix of term occurrence counts. Rows are documents or
/// clusters; entries within a row are sorted by term and never zero.
class TermCountMatrix {
 public:
  TermCountMatrix() = default;
  TermCountMatrix(std::size_t cols, RowKind kind) : cols_(cols), kind_(kind) {}

  static TermCountMatrix from_dense(
      const std::vector<std::vector<std::uint64_t>>& dense, RowKind kind);

  /// Appends a row; entries must be sorted by term with nonzero counts.
  void append_row(std::span<const CountEntry> entries);

  std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
  std::size_t cols() const noexcept { return cols_; }
  RowKind kind() const noexcept { return kind_; }

  std::span<const CountEntry> row(std::size_t r) const;
  std::uint64_t count(std::size_t r, std::size_t c) const;
  std::uint64_t row_total(std::size_t r) const;
  std::uint64_t total() const;

  /// Occurrences of each term summed over all rows.
  std::vector<std::uint64_t> column_totals() const;
  /// Number of rows in which each term occurs at least once.
  std::vector<std::uint64_t> document_frequency() const;

  std::vector<std::vector<std::uint64_t>> to_dense() const;

 private:
  std::size_t cols_ = 0;
  RowKind kind_ = RowKind::per_document;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<CountEntry> entries_;
};

struct CountedCorpus {
  Vocabulary vocabulary;
  TermCountMatrix counts;
};

CountedCorpus build_counts(const Corpus& corpus,
                           const TokenizerConfig& config = {});

/// Sums document rows by cluster label. Noise documents contribute to no row.
TermCountMatrix aggregate_by_cluster(const TermCountMatrix& counts,
                                     const ClusterAssignment& assignment);

}  // namespace clustopic
