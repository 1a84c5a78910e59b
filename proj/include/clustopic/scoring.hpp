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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clustopic/corpus.hpp"

namespace clustopic {

class WordVectorStore;

enum class Scheme { tf_idf, c_tf_idf, tf_rdf };

const char* to_string(Scheme scheme) noexcept;
/// Accepts both "tf_rdf" and "tf-rdf" spellings.
Scheme parse_scheme(std::string_view name);

inline constexpr double kDefaultTheta = 5000.0;
inline constexpr double kDefaultThetaGrid[] = {2000.0, 5000.0, 10000.0, 20000.0};

struct ScoringParams {
  Scheme scheme = Scheme::tf_rdf;
  double theta = kDefaultTheta;  // tf_rdf only
  std::size_t top_k = 10;

  /// Throws Error(validation) when theta <= 0 or top_k == 0.
  void validate() const;
};

/// Dense unit-by-term scores. A cell is "supported" when the unit contains the
/// term; keyword extraction only ranks supported cells.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t rows, std::size_t cols);
  /// Every cell supported.
  static ScoreMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  bool supported(std::size_t r, std::size_t c) const { return support_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, double value, bool supported = true);

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> support_;
};

/// Raw occurrence count of term in unit.
std::uint64_t tf(const TermCountMatrix& counts, std::size_t unit, std::size_t term);

/// ln(|D| / (1 + df)), where rows of counts are the documents. Negative when
/// the term occurs in every row.
double idf(const TermCountMatrix& counts, std::size_t term);

ScoreMatrix tf_idf(const TermCountMatrix& counts);

/// TF(t,c) * ln(1 + A / f_t), A = mean tokens per row, f_t = column total.
ScoreMatrix c_tf_idf(const TermCountMatrix& counts);

/// ln(theta / (1 + n)), n = occurrences of the term outside the scored unit.
double rdf(double theta, std::uint64_t n_outside);

/// TF(t,d) * rdf(theta, total_t - TF(t,d)) for every cell.
ScoreMatrix tf_rdf(const TermCountMatrix& counts, double theta);

/// Dispatches on params.scheme.
ScoreMatrix score(const TermCountMatrix& counts, const ScoringParams& params);

struct Keyword {
  std::string term;
  double score;

  bool operator==(const Keyword&) const = default;
};

struct TopicDescription {
  int cluster_id = 0;
  std::vector<Keyword> keywords;  // non-increasing score, ties by term
};

TopicDescription top_k_terms(const ScoreMatrix& scores, const Vocabulary& vocabulary,
                             std::size_t unit, std::size_t k);

/// One topic per row of a per-cluster score matrix.
std::vector<TopicDescription> describe_units(const ScoreMatrix& scores,
                                             const Vocabulary& vocabulary, std::size_t k);

struct HistogramBin {
  std::uint64_t low;
  std::optional<std::uint64_t> high;  // exclusive; empty for the overflow bin
  std::size_t term_count;
};

/// Distinct terms binned by their corpus-wide occurrence count, using
/// [0,e0), [e0,e1), ..., [e_last, inf).
std::vector<HistogramBin> term_frequency_histogram(const TermCountMatrix& counts,
                                                   std::span<const std::uint64_t> edges);

void write_histogram_csv(const std::filesystem::path& path, std::span<const HistogramBin> bins);

struct ThetaTrial {
  double theta;
  double coherence;  // mean pairwise topic coherence
  double coverage;
};

struct ThetaSearchResult {
  double best_theta;
  std::vector<ThetaTrial> trials;  // in candidate order
};

/// Scores every candidate with TF-RDF, extracts top-k topics per cluster and
/// keeps the theta with the highest mean pairwise coherence; ties go to the
/// smaller theta.
ThetaSearchResult theta_grid_search(const TermCountMatrix& cluster_counts,
                                    const Vocabulary& vocabulary,
                                    std::span<const double> candidate_thetas,
                                    const WordVectorStore& word_vectors, std::size_t k);

}  // namespace clustopic
