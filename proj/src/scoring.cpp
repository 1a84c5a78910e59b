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

#include "clustopic/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "clustopic/embedding.hpp"
#include "clustopic/error.hpp"
#include "clustopic/evaluation.hpp"

namespace clustopic {

const char* to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::tf_idf: return "tf_idf";
    case Scheme::c_tf_idf: return "c_tf_idf";
    case Scheme::tf_rdf: return "tf_rdf";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  std::string norm(name);
  std::replace(norm.begin(), norm.end(), '-', '_');
  if (norm == "tf_idf") return Scheme::tf_idf;
  if (norm == "c_tf_idf") return Scheme::c_tf_idf;
  if (norm == "tf_rdf") return Scheme::tf_rdf;
  fail(ErrorKind::validation, "unknown scoring scheme '" + std::string(name) + "'");
}

void ScoringParams::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    fail(ErrorKind::validation, "theta must be a positive finite number");
  }
  if (top_k == 0) fail(ErrorKind::validation, "top_k must be at least 1");
}

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0), support_(rows * cols, 0) {}

ScoreMatrix ScoreMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  ScoreMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) fail(ErrorKind::validation, "ragged score matrix");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

void ScoreMatrix::set(std::size_t r, std::size_t c, double value, bool supported) {
  values_[r * cols_ + c] = value;
  support_[r * cols_ + c] = supported ? 1 : 0;
}

std::uint64_t tf(const TermCountMatrix& counts, std::size_t unit, std::size_t term) {
  return counts.count(unit, term);
}

namespace {

double idf_from(std::size_t n_units, std::uint64_t df) {
  return std::log(static_cast<double>(n_units) / (1.0 + static_cast<double>(df)));
}

// Cells that are zero in the count matrix score exactly zero under every
// scheme, so only stored entries are visited.
template <typename CellScore>
ScoreMatrix score_entries(const TermCountMatrix& counts, CellScore&& cell) {
  ScoreMatrix out(counts.rows(), counts.cols());
  for (std::size_t r = 0; r < counts.rows(); ++r) {
    for (const auto& e : counts.row(r)) out.set(r, e.term, cell(e));
  }
  return out;
}

}  // namespace

double idf(const TermCountMatrix& counts, std::size_t term) {
  if (term >= counts.cols()) fail(ErrorKind::validation, "term index out of range");
  std::uint64_t df = 0;
  for (std::size_t r = 0; r < counts.rows(); ++r) {
    if (counts.count(r, term) > 0) ++df;
  }
  return idf_from(counts.rows(), df);
}

ScoreMatrix tf_idf(const TermCountMatrix& counts) {
  const auto df = counts.document_frequency();
  return score_entries(counts, [&](const CountEntry& e) {
    return static_cast<double>(e.count) * idf_from(counts.rows(), df[e.term]);
  });
}

ScoreMatrix c_tf_idf(const TermCountMatrix& counts) {
  if (counts.rows() == 0) fail(ErrorKind::validation, "C-TF-IDF needs at least one cluster");
  const auto totals = counts.column_totals();
  const double avg_words =
      static_cast<double>(counts.total()) / static_cast<double>(counts.rows());
  return score_entries(counts, [&](const CountEntry& e) {
    return static_cast<double>(e.count) *
           std::log1p(avg_words / static_cast<double>(totals[e.term]));
  });
}

double rdf(double theta, std::uint64_t n_outside) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    fail(ErrorKind::validation, "theta must be a positive finite number");
  }
  return std::log(theta / (1.0 + static_cast<double>(n_outside)));
}

ScoreMatrix tf_rdf(const TermCountMatrix& counts, double theta) {
  if (counts.rows() == 0) fail(ErrorKind::validation, "TF-RDF needs at least one unit");
  rdf(theta, 0);  // validates theta
  const auto totals = counts.column_totals();
  return score_entries(counts, [&](const CountEntry& e) {
    return static_cast<double>(e.count) * rdf(theta, totals[e.term] - e.count);
  });
}

ScoreMatrix score(const TermCountMatrix& counts, const ScoringParams& params) {
  params.validate();
  switch (params.scheme) {
    case Scheme::tf_idf: return tf_idf(counts);
    case Scheme::c_tf_idf: return c_tf_idf(counts);
    case Scheme::tf_rdf: return tf_rdf(counts, params.theta);
  }
  fail(ErrorKind::validation, "unknown scoring scheme");
}

TopicDescription top_k_terms(const ScoreMatrix& scores, const Vocabulary& vocabulary,
                             std::size_t unit, std::size_t k) {
  if (unit >= scores.rows()) fail(ErrorKind::validation, "unit index out of range");
  if (scores.cols() != vocabulary.size()) {
    fail(ErrorKind::alignment, "score matrix and vocabulary widths differ");
  }
  if (k == 0) fail(ErrorKind::validation, "k must be at least 1");

  std::vector<std::size_t> candidates;
  for (std::size_t c = 0; c < scores.cols(); ++c) {
    if (scores.supported(unit, c)) candidates.push_back(c);
  }
  auto better = [&](std::size_t a, std::size_t b) {
    const double sa = scores.at(unit, a), sb = scores.at(unit, b);
    if (sa != sb) return sa > sb;
    return vocabulary[a] < vocabulary[b];
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), better);

  TopicDescription topic;
  topic.cluster_id = static_cast<int>(unit);
  for (std::size_t i = 0; i < take; ++i) {
    topic.keywords.push_back({vocabulary[candidates[i]], scores.at(unit, candidates[i])});
  }
  return topic;
}

std::vector<TopicDescription> describe_units(const ScoreMatrix& scores,
                                             const Vocabulary& vocabulary, std::size_t k) {
  std::vector<TopicDescription> topics;
  topics.reserve(scores.rows());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    topics.push_back(top_k_terms(scores, vocabulary, r, k));
  }
  return topics;
}

std::vector<HistogramBin> term_frequency_histogram(const TermCountMatrix& counts,
                                                   std::span<const std::uint64_t> edges) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i] == 0 || (i > 0 && edges[i - 1] >= edges[i])) {
      fail(ErrorKind::validation, "histogram edges must be positive and strictly ascending");
    }
  }
  std::vector<HistogramBin> bins;
  std::uint64_t low = 0;
  for (auto edge : edges) {
    bins.push_back({low, edge, 0});
    low = edge;
  }
  bins.push_back({low, std::nullopt, 0});

  for (auto total : counts.column_totals()) {
    const auto bin = std::upper_bound(edges.begin(), edges.end(), total) - edges.begin();
    ++bins[static_cast<std::size_t>(bin)].term_count;
  }
  return bins;
}

void write_histogram_csv(const std::filesystem::path& path, std::span<const HistogramBin> bins) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << "bin_low,bin_high,term_count\n";
  for (const auto& bin : bins) {
    out << bin.low << ',';
    if (bin.high) out << *bin.high;
    out << ',' << bin.term_count << '\n';
  }
}

ThetaSearchResult theta_grid_search(const TermCountMatrix& cluster_counts,
                                    const Vocabulary& vocabulary,
                                    std::span<const double> candidate_thetas,
                                    const WordVectorStore& word_vectors, std::size_t k) {
  if (candidate_thetas.empty()) fail(ErrorKind::validation, "no candidate theta values");
  ThetaSearchResult result{0.0, {}};
  std::optional<std::size_t> best;
  for (double theta : candidate_thetas) {
    const auto topics = describe_units(tf_rdf(cluster_counts, theta), vocabulary, k);
    const auto tc = tc_pairwise(topics, word_vectors);
    result.trials.push_back({theta, tc.value, tc.coverage});
    const auto& trial = result.trials.back();
    if (!best) {
      best = result.trials.size() - 1;
      continue;
    }
    const auto& incumbent = result.trials[*best];
    if (trial.coherence > incumbent.coherence ||
        (trial.coherence == incumbent.coherence && trial.theta < incumbent.theta)) {
      best = result.trials.size() - 1;
    }
  }
  result.best_theta = result.trials[*best].theta;
  return result;
}

}  // namespace clustopic
