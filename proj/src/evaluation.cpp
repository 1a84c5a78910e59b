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

#include "clustopic/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "clustopic/embedding.hpp"
#include "clustopic/error.hpp"
#include "clustopic/version.hpp"

namespace clustopic {

NoisePolicy parse_noise_policy(std::string_view name) {
  if (name == "exclude") return NoisePolicy::exclude;
  if (name == "as_cluster" || name == "as-cluster") return NoisePolicy::as_cluster;
  fail(ErrorKind::validation, "unknown noise policy '" + std::string(name) + "'");
}

const char* to_string(NoisePolicy policy) noexcept {
  return policy == NoisePolicy::exclude ? "exclude" : "as_cluster";
}

ContingencyTable ContingencyTable::from_cells(std::vector<std::vector<std::size_t>> cells) {
  ContingencyTable t;
  t.cells = std::move(cells);
  const std::size_t cols = t.cells.empty() ? 0 : t.cells.front().size();
  t.row_sums.assign(t.cells.size(), 0);
  t.col_sums.assign(cols, 0);
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    if (t.cells[i].size() != cols) fail(ErrorKind::validation, "ragged contingency table");
    for (std::size_t j = 0; j < cols; ++j) {
      t.row_sums[i] += t.cells[i][j];
      t.col_sums[j] += t.cells[i][j];
      t.n += t.cells[i][j];
    }
  }
  return t;
}

bool ContingencyTable::identical_partitions() const {
  auto one_nonzero = [](auto&& values) {
    return std::count_if(values.begin(), values.end(), [](std::size_t v) { return v != 0; }) == 1;
  };
  for (const auto& row : cells) {
    if (!one_nonzero(row)) return false;
  }
  for (std::size_t j = 0; j < col_sums.size(); ++j) {
    std::vector<std::size_t> col;
    for (const auto& row : cells) col.push_back(row[j]);
    if (!one_nonzero(col)) return false;
  }
  return true;
}

ContingencyTable ContingencyTable::transposed() const {
  std::vector<std::vector<std::size_t>> t(col_sums.size(), std::vector<std::size_t>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < col_sums.size(); ++j) t[j][i] = cells[i][j];
  }
  return from_cells(std::move(t));
}

namespace {

ContingencyTable table_from_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                  std::size_t rows, std::size_t cols) {
  if (pairs.empty()) {
    fail(ErrorKind::diagnostic, "no documents left to evaluate");
  }
  std::vector<std::vector<std::size_t>> cells(rows, std::vector<std::size_t>(cols, 0));
  for (auto [r, c] : pairs) ++cells[r][c];
  // Drop empty rows (clusters whose members were all excluded).
  std::erase_if(cells, [](const auto& row) {
    return std::all_of(row.begin(), row.end(), [](std::size_t v) { return v == 0; });
  });
  return ContingencyTable::from_cells(std::move(cells));
}

double choose2(std::size_t n) {
  return 0.5 * static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0);
}

double entropy_of(std::span<const std::size_t> sums, std::size_t n) {
  double h = 0.0;
  for (auto s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

ContingencyTable contingency(const ClusterAssignment& predicted,
                             std::span<const std::string> gold, NoisePolicy policy) {
  if (gold.empty()) fail(ErrorKind::validation, "no gold labels");
  if (gold.size() != predicted.size()) {
    fail(ErrorKind::validation, "predicted and gold labelings differ in length");
  }
  std::unordered_map<std::string_view, std::size_t> classes;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const auto k = static_cast<std::size_t>(predicted.k());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto [it, inserted] = classes.try_emplace(gold[i], classes.size());
    const int label = predicted[i];
    if (label == kNoise) {
      if (policy == NoisePolicy::exclude) continue;
      pairs.emplace_back(k, it->second);
    } else {
      pairs.emplace_back(static_cast<std::size_t>(label), it->second);
    }
  }
  return table_from_pairs(pairs, k + 1, classes.size());
}

ContingencyTable contingency(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size()) {
    fail(ErrorKind::validation, "predicted and gold labelings differ in length");
  }
  std::unordered_map<int, std::size_t> rows, cols;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto r = rows.try_emplace(predicted[i], rows.size()).first->second;
    const auto c = cols.try_emplace(gold[i], cols.size()).first->second;
    pairs.emplace_back(r, c);
  }
  return table_from_pairs(pairs, rows.size(), cols.size());
}

double purity(const ContingencyTable& table) {
  if (table.n == 0) fail(ErrorKind::diagnostic, "purity of an empty table");
  std::size_t hits = 0;
  for (const auto& row : table.cells) hits += *std::max_element(row.begin(), row.end());
  return static_cast<double>(hits) / static_cast<double>(table.n);
}

namespace {

struct PairSums {
  double cells = 0.0, rows = 0.0, cols = 0.0, total = 0.0;
};

PairSums pair_sums(const ContingencyTable& table) {
  if (table.n < 2) fail(ErrorKind::validation, "pair-counting metrics need at least 2 items");
  PairSums s;
  for (const auto& row : table.cells) {
    for (auto v : row) s.cells += choose2(v);
  }
  for (auto v : table.row_sums) s.rows += choose2(v);
  for (auto v : table.col_sums) s.cols += choose2(v);
  s.total = choose2(table.n);
  return s;
}

}  // namespace

double rand_index(const ContingencyTable& table) {
  const auto s = pair_sums(table);
  // Pairs together in both + pairs apart in both.
  const double agree = s.total + 2.0 * s.cells - s.rows - s.cols;
  return agree / s.total;
}

double adjusted_rand(const ContingencyTable& table) {
  const auto s = pair_sums(table);
  const double expected = s.rows * s.cols / s.total;
  const double max_index = 0.5 * (s.rows + s.cols);
  const double denom = max_index - expected;
  if (denom == 0.0) return table.identical_partitions() ? 1.0 : 0.0;
  return (s.cells - expected) / denom;
}

double mutual_information(const ContingencyTable& table) {
  const double n = static_cast<double>(table.n);
  double mi = 0.0;
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    for (std::size_t j = 0; j < table.col_sums.size(); ++j) {
      const auto nij = table.cells[i][j];
      if (nij == 0) continue;
      const double v = static_cast<double>(nij);
      mi += v / n *
            std::log(n * v /
                     (static_cast<double>(table.row_sums[i]) * static_cast<double>(table.col_sums[j])));
    }
  }
  return std::max(mi, 0.0);
}

double row_entropy(const ContingencyTable& table) { return entropy_of(table.row_sums, table.n); }
double col_entropy(const ContingencyTable& table) { return entropy_of(table.col_sums, table.n); }

double nmi(const ContingencyTable& table, NmiNormalization normalization) {
  if (table.n == 0) fail(ErrorKind::diagnostic, "NMI of an empty table");
  const double hu = row_entropy(table), hv = col_entropy(table);
  if (hu == 0.0 && hv == 0.0) return 1.0;
  if (hu == 0.0 || hv == 0.0) return 0.0;
  if (table.identical_partitions()) return 1.0;
  const double norm =
      normalization == NmiNormalization::geometric ? std::sqrt(hu * hv) : 0.5 * (hu + hv);
  return std::clamp(mutual_information(table) / norm, 0.0, 1.0);
}

double expected_mutual_information(const ContingencyTable& table) {
  const auto n = table.n;
  const double nd = static_cast<double>(n);
  const double lg_n = std::lgamma(nd + 1.0);
  double emi = 0.0;
  for (auto a : table.row_sums) {
    for (auto b : table.col_sums) {
      const double ad = static_cast<double>(a), bd = static_cast<double>(b);
      // log of a! b! (n-a)! (n-b)! / n!, shared by every nij term.
      const double lg_fixed = std::lgamma(ad + 1.0) + std::lgamma(bd + 1.0) +
                              std::lgamma(nd - ad + 1.0) + std::lgamma(nd - bd + 1.0) - lg_n;
      const std::size_t lo = std::max<std::size_t>(1, a + b > n ? a + b - n : 0);
      const std::size_t hi = std::min(a, b);
      for (std::size_t nij = lo; nij <= hi; ++nij) {
        const double v = static_cast<double>(nij);
        const double log_prob = lg_fixed - std::lgamma(v + 1.0) - std::lgamma(ad - v + 1.0) -
                                std::lgamma(bd - v + 1.0) -
                                std::lgamma(nd - ad - bd + v + 1.0);
        emi += v / nd * std::log(nd * v / (ad * bd)) * std::exp(log_prob);
      }
    }
  }
  return emi;
}

double ami(const ContingencyTable& table) {
  if (table.n == 0) fail(ErrorKind::diagnostic, "AMI of an empty table");
  if (table.identical_partitions()) return 1.0;
  const double mi = mutual_information(table);
  const double emi = expected_mutual_information(table);
  const double denom = 0.5 * (row_entropy(table) + col_entropy(table)) - emi;
  if (denom == 0.0) return 0.0;
  return (mi - emi) / denom;
}

namespace {

template <typename TopicScore>
CoherenceResult coherence(std::span<const TopicDescription> topics,
                          const WordVectorStore& word_vectors, TopicScore&& topic_score) {
  CoherenceResult result;
  std::size_t total = 0, known = 0;
  double sum = 0.0;
  for (const auto& topic : topics) {
    std::vector<std::span<const double>> vecs;
    for (const auto& kw : topic.keywords) {
      ++total;
      if (auto v = word_vectors.find(kw.term)) vecs.push_back(*v);
    }
    known += vecs.size();
    if (vecs.size() < 2) {
      result.per_topic.push_back(std::nullopt);
      continue;
    }
    const double s = topic_score(vecs);
    result.per_topic.push_back(s);
    sum += s;
    ++result.topics_scored;
  }
  result.coverage = total == 0 ? 0.0 : static_cast<double>(known) / static_cast<double>(total);
  if (result.topics_scored == 0) {
    fail(ErrorKind::diagnostic,
         "no topic has two keywords with word vectors (coverage " +
             std::to_string(result.coverage) + ")");
  }
  result.value = sum / static_cast<double>(result.topics_scored);
  return result;
}

}  // namespace

CoherenceResult tc_pairwise(std::span<const TopicDescription> topics,
                            const WordVectorStore& word_vectors) {
  return coherence(topics, word_vectors, [](const std::vector<std::span<const double>>& vecs) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < vecs.size(); ++a) {
      for (std::size_t b = a + 1; b < vecs.size(); ++b) {
        sum += cosine_similarity(vecs[a], vecs[b]);
        ++pairs;
      }
    }
    return sum / static_cast<double>(pairs);
  });
}

CoherenceResult tc_centroid(std::span<const TopicDescription> topics,
                            const WordVectorStore& word_vectors) {
  return coherence(topics, word_vectors, [](const std::vector<std::span<const double>>& vecs) {
    std::vector<double> centroid(vecs.front().size(), 0.0);
    for (const auto& v : vecs) {
      for (std::size_t i = 0; i < v.size(); ++i) centroid[i] += v[i];
    }
    for (auto& c : centroid) c /= static_cast<double>(vecs.size());
    double sum = 0.0;
    for (const auto& v : vecs) sum += cosine_similarity(v, centroid);
    return sum / static_cast<double>(vecs.size());
  });
}

nlohmann::json EvaluationReport::to_json() const {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {
      {"schema_version", kSchemaVersion},
      {"purity", opt(purity)},
      {"rand", opt(rand)},
      {"ari", opt(ari)},
      {"nmi", opt(nmi)},
      {"ami", opt(ami)},
      {"tc_pairwise", opt(tc_pairwise)},
      {"tc_centroid", opt(tc_centroid)},
      {"coverage", opt(coverage)},
      {"evaluated_documents", evaluated_documents},
      {"configuration", configuration},
  };
}

void evaluate_partition(EvaluationReport& report, const ClusterAssignment& predicted,
                        std::span<const std::string> gold, NoisePolicy policy,
                        NmiNormalization normalization) {
  const auto table = contingency(predicted, gold, policy);
  report.evaluated_documents = table.n;
  report.purity = purity(table);
  report.nmi = nmi(table, normalization);
  report.ami = ami(table);
  if (table.n >= 2) {
    report.rand = rand_index(table);
    report.ari = adjusted_rand(table);
  }
  report.configuration["noise_policy"] = to_string(policy);
  report.configuration["nmi_normalization"] =
      normalization == NmiNormalization::geometric ? "geometric" : "arithmetic";
}

void evaluate_topics(EvaluationReport& report, std::span<const TopicDescription> topics,
                     const WordVectorStore& word_vectors) {
  const auto pairwise = tc_pairwise(topics, word_vectors);
  const auto centroid = tc_centroid(topics, word_vectors);
  report.tc_pairwise = pairwise.value;
  report.tc_centroid = centroid.value;
  report.coverage = pairwise.coverage;
}

}  // namespace clustopic
