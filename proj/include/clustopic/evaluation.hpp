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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "clustopic/assignment.hpp"
#include "clustopic/scoring.hpp"

namespace clustopic {

class WordVectorStore;

enum class NoisePolicy {
  exclude,     // noise documents are dropped before building the table
  as_cluster,  // noise documents form one extra predicted cluster
};

NoisePolicy parse_noise_policy(std::string_view name);
const char* to_string(NoisePolicy policy) noexcept;

/// cells[i][j] = |predicted cluster i  intersect  gold class j|.
struct ContingencyTable {
  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::size_t> row_sums;
  std::vector<std::size_t> col_sums;
  std::size_t n = 0;

  static ContingencyTable from_cells(std::vector<std::vector<std::size_t>> cells);
  /// Same partition on both sides up to relabeling.
  bool identical_partitions() const;
  ContingencyTable transposed() const;
};

/// Gold classes are numbered by first appearance.
ContingencyTable contingency(const ClusterAssignment& predicted,
                             std::span<const std::string> gold,
                             NoisePolicy policy = NoisePolicy::exclude);
/// Both sides given as raw integer labels; no noise handling.
ContingencyTable contingency(std::span<const int> predicted, std::span<const int> gold);

double purity(const ContingencyTable& table);
double rand_index(const ContingencyTable& table);
double adjusted_rand(const ContingencyTable& table);

enum class NmiNormalization { geometric, arithmetic };

double mutual_information(const ContingencyTable& table);
/// Entropies of the predicted (rows) and gold (columns) partitions, in nats.
double row_entropy(const ContingencyTable& table);
double col_entropy(const ContingencyTable& table);

double nmi(const ContingencyTable& table,
           NmiNormalization normalization = NmiNormalization::geometric);

/// E[MI] under the permutation model with fixed marginals (exact
/// hypergeometric sum).
double expected_mutual_information(const ContingencyTable& table);
double ami(const ContingencyTable& table);

struct CoherenceResult {
  double value = 0.0;          // mean over scored topics
  double coverage = 0.0;       // fraction of keywords with a word vector
  std::size_t topics_scored = 0;
  std::vector<std::optional<double>> per_topic;  // empty when under 2 known keywords
};

/// Mean cosine over unordered pairs of in-vocabulary keywords, per topic.
CoherenceResult tc_pairwise(std::span<const TopicDescription> topics,
                            const WordVectorStore& word_vectors);
/// Mean cosine between each in-vocabulary keyword and the keywords' centroid.
CoherenceResult tc_centroid(std::span<const TopicDescription> topics,
                            const WordVectorStore& word_vectors);

struct EvaluationReport {
  std::optional<double> purity, rand, ari, nmi, ami;
  std::optional<double> tc_pairwise, tc_centroid, coverage;
  std::size_t evaluated_documents = 0;
  nlohmann::json configuration = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Fills the partition metrics from an assignment and gold labels.
void evaluate_partition(EvaluationReport& report, const ClusterAssignment& predicted,
                        std::span<const std::string> gold, NoisePolicy policy,
                        NmiNormalization normalization = NmiNormalization::geometric);
/// Fills the coherence metrics.
void evaluate_topics(EvaluationReport& report, std::span<const TopicDescription> topics,
                     const WordVectorStore& word_vectors);

}  // namespace clustopic
