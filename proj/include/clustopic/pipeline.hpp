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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clustopic/clustering.hpp"
#include "clustopic/corpus.hpp"
#include "clustopic/embedding.hpp"
#include "clustopic/error.hpp"
#include "clustopic/evaluation.hpp"
#include "clustopic/scoring.hpp"

namespace clustopic {

/// An Error raised inside a pipeline stage, tagged with that stage's name.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), "[" + stage + "] " + to_string(cause.kind()) + ": " + cause.what()),
        stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct ClusteringOptions {
  Algorithm algorithm = Algorithm::kmeans;
  std::size_t k = 20;
  std::size_t max_iter = 300;
  double tol = 1e-4;
  std::size_t n_init = 1;
  std::size_t min_cluster_size = 5;
  std::optional<std::size_t> min_samples;
  bool allow_single_cluster = true;
  std::size_t reduce_dims = 5;  // native PCA width ahead of HDBSCAN
};

struct RunConfig {
  std::filesystem::path corpus;
  CorpusFormat corpus_format = CorpusFormat::jsonl;
  std::filesystem::path embeddings;
  std::optional<std::filesystem::path> reduced;        // replaces PCA ahead of HDBSCAN
  std::optional<std::filesystem::path> projection_2d;  // replaces PCA for projection.csv
  TokenizerConfig tokenizer;
  ClusteringOptions clustering;
  ScoringParams scoring;
  std::vector<std::uint64_t> histogram_edges{10, 60, 1000, 5000, 10000, 20000};
  bool evaluate = true;
  std::optional<std::filesystem::path> word_vectors;
  NoisePolicy noise_policy = NoisePolicy::exclude;
  NmiNormalization nmi_normalization = NmiNormalization::geometric;
  bool export_projection = true;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;

  /// Throws Error(validation) on inconsistent settings.
  void validate() const;

  nlohmann::json to_json() const;
  /// Keys absent from j keep their defaults. Relative paths resolve against base_dir.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& config_file);
};

struct RunManifest {
  nlohmann::json config;
  std::map<std::string, std::string> input_digests;  // name -> sha256 hex
  std::map<std::string, double> stage_seconds;
  std::vector<std::string> outputs;
  std::string reduction;  // "none", "pca" or "external"

  nlohmann::json to_json() const;
};

/// Everything up to and including clustering; shared by run and compare.
struct PreparedRun {
  Corpus corpus;
  CountedCorpus counted;
  EmbeddingMatrix embeddings;
  ClusterAssignment assignment;
  std::optional<Eigen::MatrixXd> reduced;
  std::string reduction;
  RunManifest manifest;
};

PreparedRun prepare(const RunConfig& config);

/// Per-cluster topics under the configured scheme.
std::vector<TopicDescription> describe_clusters(const PreparedRun& prepared,
                                                const ScoringParams& params);

/// Full run. Writes topics.json, assignments.csv, histogram.csv,
/// metrics.json (gold labels or word vectors present), projection.csv and
/// manifest.json into config.output_dir. On failure nothing is left behind.
RunManifest run(const RunConfig& config);

struct SchemeComparison {
  Scheme scheme;
  double tc_pairwise;
  double tc_centroid;
  double coverage;
  std::vector<TopicDescription> topics;
};

/// One clustering, then topics and coherence for every scheme. Writes
/// comparison.json into config.output_dir.
std::vector<SchemeComparison> compare_schemes(const RunConfig& config,
                                              std::span<const Scheme> schemes);

/// Clusters once and grid-searches theta. Writes theta_search.json.
ThetaSearchResult grid_search_theta(const RunConfig& config, std::span<const double> thetas);

/// Writes histogram.csv for the corpus alone.
std::vector<HistogramBin> corpus_histogram(const RunConfig& config);

// File formats shared with the eval subcommand.
nlohmann::json topics_to_json(std::span<const TopicDescription> topics,
                              const ScoringParams& params,
                              std::span<const std::size_t> cluster_sizes);
std::vector<TopicDescription> topics_from_json(const nlohmann::json& j);
void write_assignments_csv(const std::filesystem::path& path, std::span<const std::string> ids,
                           const ClusterAssignment& assignment);
/// Returns labels in the order of ids; throws Error(alignment) on mismatch.
ClusterAssignment read_assignments_csv(const std::filesystem::path& path,
                                       std::span<const std::string> ids);

/// Standalone evaluation from saved outputs. Writes metrics.json into out_dir.
EvaluationReport evaluate_saved(const std::filesystem::path& corpus, CorpusFormat format,
                                const std::filesystem::path& assignments,
                                const std::optional<std::filesystem::path>& topics,
                                const std::optional<std::filesystem::path>& word_vectors,
                                NoisePolicy policy, const std::filesystem::path& out_dir);

std::string sha256_file(const std::filesystem::path& path);

}  // namespace clustopic
