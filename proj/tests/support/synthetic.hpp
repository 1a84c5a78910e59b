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

// Seeded synthetic data: Gaussian blobs, a planted-topic corpus with its
// document embeddings, and word vectors with known cosine structure.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "clustopic/clustering.hpp"
#include "clustopic/corpus.hpp"
#include "clustopic/embedding.hpp"

namespace clustopic::synth {

/// Box-Muller over the portable uniform draw, so samples match across platforms.
inline double normal(std::mt19937_64& rng) {
  double u1 = detail::uniform01(rng);
  while (u1 <= 0.0) u1 = detail::uniform01(rng);
  const double u2 = detail::uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct Blobs {
  Eigen::MatrixXd x;
  std::vector<int> labels;
};

/// n_blobs isotropic blobs of per_blob points. Centres are drawn from
/// N(0, centre_sigma^2 I) unless centres is given.
inline Blobs gaussian_blobs(std::size_t n_blobs, std::size_t per_blob, std::size_t dim,
                            double centre_sigma, double sigma, std::uint64_t seed,
                            const Eigen::MatrixXd* centres = nullptr) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd c(static_cast<Eigen::Index>(n_blobs), static_cast<Eigen::Index>(dim));
  if (centres != nullptr) {
    c = *centres;
  } else {
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = centre_sigma * normal(rng);
  }
  Blobs b;
  b.x.resize(static_cast<Eigen::Index>(n_blobs * per_blob), static_cast<Eigen::Index>(dim));
  b.labels.reserve(n_blobs * per_blob);
  for (std::size_t k = 0; k < n_blobs; ++k) {
    for (std::size_t p = 0; p < per_blob; ++p) {
      const auto r = static_cast<Eigen::Index>(k * per_blob + p);
      for (Eigen::Index d = 0; d < b.x.cols(); ++d) {
        b.x(r, d) = c(static_cast<Eigen::Index>(k), d) + sigma * normal(rng);
      }
      b.labels.push_back(static_cast<int>(k));
    }
  }
  return b;
}

inline const std::vector<std::string>& stop_words() {
  static const std::vector<std::string> words{"the", "of",   "and", "to", "in",
                                              "is",  "that", "for", "it", "with"};
  return words;
}

struct PlantedConfig {
  std::size_t clusters = 4;
  std::size_t docs_per_cluster = 200;
  std::size_t terms_per_cluster = 20;
  std::size_t topical_tokens = 30;  // per document, from its own cluster
  std::size_t leak_tokens = 2;      // per document, from other clusters
  std::size_t stop_min = 13;        // occurrences of each stop word per document
  std::size_t stop_max = 15;
  std::size_t embedding_dim = 16;
  std::uint64_t seed = 7;
};

inline std::string topical_term(std::size_t cluster, std::size_t j) {
  return "topic" + std::to_string(cluster) + "term" + std::to_string(j);
}

struct PlantedCorpus {
  PlantedConfig config;
  std::vector<Document> documents;
  EmbeddingMatrix embeddings;
  std::vector<int> gold;
};

/// Documents whose topical tokens come from their cluster's own term list,
/// with a few leaked tokens and heavy stop-word padding. Embeddings place
/// each cluster around 10 * e_c.
inline PlantedCorpus planted_corpus(const PlantedConfig& cfg = {}) {
  std::mt19937_64 rng(cfg.seed);
  auto pick = [&](std::size_t n) {
    return static_cast<std::size_t>(detail::uniform01(rng) * static_cast<double>(n));
  };
  PlantedCorpus out;
  out.config = cfg;
  const std::size_t n = cfg.clusters * cfg.docs_per_cluster;
  out.embeddings.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(cfg.embedding_dim));
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    for (std::size_t d = 0; d < cfg.docs_per_cluster; ++d) {
      std::vector<std::string> tokens;
      for (std::size_t t = 0; t < cfg.topical_tokens; ++t) {
        tokens.push_back(topical_term(c, pick(cfg.terms_per_cluster)));
      }
      for (std::size_t t = 0; t < cfg.leak_tokens; ++t) {
        const std::size_t other = (c + 1 + pick(cfg.clusters - 1)) % cfg.clusters;
        tokens.push_back(topical_term(other, pick(cfg.terms_per_cluster)));
      }
      for (const auto& w : stop_words()) {
        const std::size_t reps = cfg.stop_min + pick(cfg.stop_max - cfg.stop_min + 1);
        tokens.insert(tokens.end(), reps, w);
      }
      std::shuffle(tokens.begin(), tokens.end(), rng);
      std::string text;
      for (const auto& t : tokens) {
        if (!text.empty()) text += ' ';
        text += t;
      }
      const std::size_t row = out.documents.size();
      const std::string id = "doc" + std::to_string(row);
      out.documents.push_back({id, text, "topic" + std::to_string(c)});
      out.embeddings.ids.push_back(id);
      out.gold.push_back(static_cast<int>(c));
      for (std::size_t k = 0; k < cfg.embedding_dim; ++k) {
        out.embeddings.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) =
            (k == c ? 10.0 : 0.0) + normal(rng);
      }
    }
  }
  return out;
}

struct WordVectorEntry {
  std::string term;
  std::vector<double> vec;
};

/// Topical word j of cluster c is e_c + e_own / 3, so two words of the same
/// cluster have cosine 0.9 and words of different clusters have cosine 0.
/// Every stop word gets an axis of its own.
inline std::vector<WordVectorEntry> planted_word_vectors(const PlantedConfig& cfg = {}) {
  const std::size_t topical = cfg.clusters * cfg.terms_per_cluster;
  const std::size_t dim = cfg.clusters + topical + stop_words().size();
  std::vector<WordVectorEntry> out;
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    for (std::size_t j = 0; j < cfg.terms_per_cluster; ++j) {
      std::vector<double> v(dim, 0.0);
      v[c] = 1.0;
      v[cfg.clusters + c * cfg.terms_per_cluster + j] = 1.0 / 3.0;
      out.push_back({topical_term(c, j), std::move(v)});
    }
  }
  for (std::size_t s = 0; s < stop_words().size(); ++s) {
    std::vector<double> v(dim, 0.0);
    v[cfg.clusters + topical + s] = 1.0;
    out.push_back({stop_words()[s], std::move(v)});
  }
  return out;
}

inline WordVectorStore to_store(const std::vector<WordVectorEntry>& entries) {
  WordVectorStore store(entries.front().vec.size());
  for (const auto& e : entries) store.insert(e.term, e.vec);
  return store;
}

inline void write_word_vectors(const std::filesystem::path& path,
                               const std::vector<WordVectorEntry>& entries) {
  std::ofstream out(path);
  out << entries.size() << ' ' << entries.front().vec.size() << '\n';
  out.precision(17);
  for (const auto& e : entries) {
    out << e.term;
    for (double v : e.vec) out << ' ' << v;
    out << '\n';
  }
}

inline void write_jsonl(const std::filesystem::path& path, const std::vector<Document>& docs) {
  std::ofstream out(path);
  for (const auto& d : docs) {
    nlohmann::json j{{"id", d.id}, {"text", d.text}};
    if (d.gold_label) j["label"] = *d.gold_label;
    out << j.dump() << '\n';
  }
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("clustopic-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace clustopic::synth
