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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "clustopic/assignment.hpp"

namespace clustopic {

class Corpus;

/// One row per document, in corpus order.
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

// Interchange layout (little-endian):
//   "EMB1" | u32 n_rows | u32 dim | n_rows x (u16 len, utf-8 id) | n_rows*dim f32
inline constexpr char kEmbeddingMagic[4] = {'E', 'M', 'B', '1'};

EmbeddingMatrix read_embeddings(std::istream& in);
void write_embeddings(std::ostream& out, const EmbeddingMatrix& m);

/// Reads an interchange file and checks it holds expected_rows finite rows.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                std::optional<std::size_t> expected_rows = std::nullopt);
void save_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m);

/// Throws Error(alignment) unless ids match the corpus ids in order.
void check_alignment(const EmbeddingMatrix& m, const Corpus& corpus);

class WordVectorStore {
 public:
  WordVectorStore() = default;
  explicit WordVectorStore(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return index_.size(); }

  /// Adds or replaces a vector. Throws Error(validation) on width mismatch.
  void insert(std::string term, std::span<const double> vec);
  /// Empty optional on a miss.
  std::optional<std::span<const double>> find(std::string_view term) const;
  bool contains(std::string_view term) const { return find(term).has_value(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dim_ = 0;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

/// word2vec text format; an optional "count dim" header line is accepted.
WordVectorStore parse_word_vectors(std::istream& in);
WordVectorStore load_word_vectors(const std::filesystem::path& path);

/// Returns 0 when either vector is all zeros.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct PcaResult {
  Eigen::RowVectorXd mean;
  Eigen::MatrixXd components;  // dim x out_dim, orthonormal columns
  Eigen::MatrixXd projected;   // n_rows x out_dim
  std::vector<double> explained_variance_ratio;

  Eigen::MatrixXd reconstruct() const;
};

/// Projects mean-centred rows onto the leading principal axes. Each axis is
/// oriented so its largest-magnitude coordinate is positive.
PcaResult pca_fit_transform(const Eigen::MatrixXd& x, std::size_t out_dim);

/// CSV with header doc_id,x,y,cluster_label.
void export_projection(const std::filesystem::path& path, std::span<const std::string> ids,
                       const Eigen::MatrixXd& projected, const ClusterAssignment& assignment);

}  // namespace clustopic
