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

#include "clustopic/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <openssl/evp.h>

#include "clustopic/version.hpp"
#include "csv.hpp"

namespace clustopic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename F>
auto stage(RunManifest& manifest, const std::string& name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
      body();
      manifest.stage_seconds[name] +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } else {
      auto out = body();
      manifest.stage_seconds[name] +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return out;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  } catch (const std::exception& e) {
    throw StageError(name, Error(ErrorKind::io, e.what()));
  }
}

// Collects outputs in a hidden sibling directory and moves them into place
// only on commit(); an uncommitted stage removes everything it wrote.
class OutputStage {
 public:
  explicit OutputStage(fs::path final_dir) : final_dir_(std::move(final_dir)) {
    fs::create_directories(final_dir_);
    staging_ = final_dir_ / (".staging-" + std::to_string(::getpid()));
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  OutputStage(const OutputStage&) = delete;
  OutputStage& operator=(const OutputStage&) = delete;
  ~OutputStage() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }

  fs::path path(const std::string& name) {
    names_.push_back(name);
    return staging_ / name;
  }

  std::vector<std::string> commit() {
    for (const auto& name : names_) {
      fs::rename(staging_ / name, final_dir_ / name);
    }
    return names_;
  }

 private:
  fs::path final_dir_;
  fs::path staging_;
  std::vector<std::string> names_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;
  ~Sha256() { EVP_MD_CTX_free(ctx_); }

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
      std::snprintf(buf, sizeof(buf), "%02x", md[i]);
      out += buf;
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

// A plain_dir corpus digests the sorted "name:sha256" lines of its files.
std::string corpus_digest(const fs::path& path, CorpusFormat format) {
  if (format == CorpusFormat::jsonl) return sha256_file(path);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Sha256 digest;
  for (const auto& f : files) {
    const auto line = f.filename().string() + ":" + sha256_file(f) + "\n";
    digest.update(line.data(), line.size());
  }
  return digest.hex();
}

std::vector<std::size_t> cluster_sizes(const ClusterAssignment& a) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(a.k()), 0);
  for (int l : a.labels()) {
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  }
  return sizes;
}

Eigen::MatrixXd load_aligned(const fs::path& path, const Corpus& corpus) {
  auto m = load_embeddings(path, corpus.size());
  check_alignment(m, corpus);
  return std::move(m.values);
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  Sha256 digest;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    digest.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return digest.hex();
}

void RunConfig::validate() const {
  if (corpus.empty()) fail(ErrorKind::validation, "no corpus path given");
  if (embeddings.empty()) fail(ErrorKind::validation, "no embeddings path given");
  scoring.validate();
  if (clustering.algorithm != Algorithm::hdbscan && clustering.k == 0) {
    fail(ErrorKind::validation, "k must be at least 1");
  }
  if (clustering.algorithm == Algorithm::hdbscan && clustering.min_cluster_size < 2) {
    fail(ErrorKind::validation, "min_cluster_size must be at least 2");
  }
  if (clustering.reduce_dims == 0) fail(ErrorKind::validation, "reduce_dims must be positive");
}

json RunConfig::to_json() const {
  auto opt_path = [](const std::optional<fs::path>& p) -> json {
    return p ? json(p->string()) : json(nullptr);
  };
  return {
      {"corpus", {{"path", corpus.string()},
                  {"format", corpus_format == CorpusFormat::jsonl ? "jsonl" : "plain_dir"}}},
      {"embeddings", embeddings.string()},
      {"reduced", opt_path(reduced)},
      {"projection_2d", opt_path(projection_2d)},
      {"tokenizer", {{"lowercase", tokenizer.lowercase},
                     {"min_length", tokenizer.min_length},
                     {"min_count", tokenizer.min_count}}},
      {"clustering",
       {{"algorithm", to_string(clustering.algorithm)},
        {"k", clustering.k},
        {"max_iter", clustering.max_iter},
        {"tol", clustering.tol},
        {"n_init", clustering.n_init},
        {"min_cluster_size", clustering.min_cluster_size},
        {"min_samples", clustering.min_samples ? json(*clustering.min_samples) : json(nullptr)},
        {"allow_single_cluster", clustering.allow_single_cluster},
        {"reduce_dims", clustering.reduce_dims}}},
      {"scoring", {{"scheme", to_string(scoring.scheme)},
                   {"theta", scoring.theta},
                   {"top_k", scoring.top_k}}},
      {"histogram_edges", histogram_edges},
      {"evaluation",
       {{"enabled", evaluate},
        {"word_vectors", opt_path(word_vectors)},
        {"noise_policy", to_string(noise_policy)},
        {"nmi_normalization",
         nmi_normalization == NmiNormalization::geometric ? "geometric" : "arithmetic"}}},
      {"export_projection", export_projection},
      {"output_dir", output_dir.string()},
      {"seed", seed},
  };
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
  RunConfig c;
  auto resolve = [&](const std::string& p) -> fs::path {
    fs::path path(p);
    return (path.is_relative() && !base_dir.empty()) ? base_dir / path : path;
  };
  auto opt_path = [&](const json& v) -> std::optional<fs::path> {
    if (v.is_null()) return std::nullopt;
    return resolve(v.get<std::string>());
  };
  try {
    if (!j.is_object()) fail(ErrorKind::parse, "run config must be a JSON object");
    if (j.contains("corpus")) {
      const auto& cj = j["corpus"];
      if (cj.is_string()) {
        c.corpus = resolve(cj.get<std::string>());
      } else {
        c.corpus = resolve(cj.at("path").get<std::string>());
        if (cj.contains("format")) c.corpus_format = parse_corpus_format(cj["format"].get<std::string>());
      }
    }
    if (j.contains("embeddings")) c.embeddings = resolve(j["embeddings"].get<std::string>());
    if (j.contains("reduced")) c.reduced = opt_path(j["reduced"]);
    if (j.contains("projection_2d")) c.projection_2d = opt_path(j["projection_2d"]);
    if (j.contains("tokenizer")) {
      const auto& t = j["tokenizer"];
      c.tokenizer.lowercase = t.value("lowercase", c.tokenizer.lowercase);
      c.tokenizer.min_length = t.value("min_length", c.tokenizer.min_length);
      c.tokenizer.min_count = t.value("min_count", c.tokenizer.min_count);
    }
    if (j.contains("clustering")) {
      const auto& k = j["clustering"];
      auto& o = c.clustering;
      if (k.contains("algorithm")) o.algorithm = parse_algorithm(k["algorithm"].get<std::string>());
      o.k = k.value("k", o.k);
      o.max_iter = k.value("max_iter", o.max_iter);
      o.tol = k.value("tol", o.tol);
      o.n_init = k.value("n_init", o.n_init);
      o.min_cluster_size = k.value("min_cluster_size", o.min_cluster_size);
      if (k.contains("min_samples") && !k["min_samples"].is_null()) {
        o.min_samples = k["min_samples"].get<std::size_t>();
      }
      o.allow_single_cluster = k.value("allow_single_cluster", o.allow_single_cluster);
      o.reduce_dims = k.value("reduce_dims", o.reduce_dims);
    }
    if (j.contains("scoring")) {
      const auto& s = j["scoring"];
      if (s.contains("scheme")) c.scoring.scheme = parse_scheme(s["scheme"].get<std::string>());
      c.scoring.theta = s.value("theta", c.scoring.theta);
      c.scoring.top_k = s.value("top_k", c.scoring.top_k);
    }
    if (j.contains("histogram_edges")) {
      c.histogram_edges = j["histogram_edges"].get<std::vector<std::uint64_t>>();
    }
    if (j.contains("evaluation")) {
      const auto& e = j["evaluation"];
      c.evaluate = e.value("enabled", c.evaluate);
      if (e.contains("word_vectors")) c.word_vectors = opt_path(e["word_vectors"]);
      if (e.contains("noise_policy")) {
        c.noise_policy = parse_noise_policy(e["noise_policy"].get<std::string>());
      }
      if (e.contains("nmi_normalization")) {
        const auto name = e["nmi_normalization"].get<std::string>();
        if (name == "geometric") c.nmi_normalization = NmiNormalization::geometric;
        else if (name == "arithmetic") c.nmi_normalization = NmiNormalization::arithmetic;
        else fail(ErrorKind::validation, "unknown nmi_normalization '" + name + "'");
      }
    }
    c.export_projection = j.value("export_projection", c.export_projection);
    if (j.contains("output_dir")) c.output_dir = resolve(j["output_dir"].get<std::string>());
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("run config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const fs::path& config_file) {
  return from_json(read_json(config_file), config_file.parent_path());
}

json RunManifest::to_json() const {
  return {
      {"schema_version", kSchemaVersion},
      {"version", kVersion},
      {"config", config},
      {"input_digests", input_digests},
      {"stage_seconds", stage_seconds},
      {"outputs", outputs},
      {"reduction", reduction},
  };
}

PreparedRun prepare(const RunConfig& config) {
  RunManifest manifest;
  stage(manifest, "config", [&] { config.validate(); });
  manifest.config = config.to_json();

  auto corpus = stage(manifest, "ingest", [&] {
    manifest.input_digests["corpus"] = corpus_digest(config.corpus, config.corpus_format);
    return ingest_corpus(config.corpus, config.corpus_format);
  });
  auto counted = stage(manifest, "count", [&] { return build_counts(corpus, config.tokenizer); });
  auto embeddings = stage(manifest, "embeddings", [&] {
    manifest.input_digests["embeddings"] = sha256_file(config.embeddings);
    auto m = load_embeddings(config.embeddings, corpus.size());
    check_alignment(m, corpus);
    return m;
  });

  std::optional<Eigen::MatrixXd> reduced;
  std::string reduction = "none";
  const auto& opts = config.clustering;
  if (opts.algorithm == Algorithm::hdbscan) {
    reduced = stage(manifest, "reduce", [&] {
      if (config.reduced) {
        manifest.input_digests["reduced"] = sha256_file(*config.reduced);
        reduction = "external";
        return load_aligned(*config.reduced, corpus);
      }
      reduction = "pca";
      const auto dims = std::min({opts.reduce_dims, embeddings.rows(), embeddings.dim()});
      return pca_fit_transform(embeddings.values, dims).projected;
    });
  }
  manifest.reduction = reduction;

  auto assignment = stage(manifest, "cluster", [&] {
    switch (opts.algorithm) {
      case Algorithm::kmeans:
        return kmeans(embeddings.values,
                      {opts.k, opts.max_iter, opts.tol, config.seed, opts.n_init})
            .assignment;
      case Algorithm::kmedoids:
        return kmedoids(embeddings.values, {opts.k, config.seed, opts.max_iter}).assignment;
      case Algorithm::hdbscan:
        return hdbscan(*reduced,
                       {opts.min_cluster_size, opts.min_samples, opts.allow_single_cluster})
            .assignment;
    }
    fail(ErrorKind::validation, "unknown clustering algorithm");
  });

  return PreparedRun{std::move(corpus),     std::move(counted), std::move(embeddings),
                     std::move(assignment), std::move(reduced), std::move(reduction),
                     std::move(manifest)};
}

std::vector<TopicDescription> describe_clusters(const PreparedRun& prepared,
                                                const ScoringParams& params) {
  const auto cluster_counts = aggregate_by_cluster(prepared.counted.counts, prepared.assignment);
  if (cluster_counts.rows() == 0) {
    fail(ErrorKind::diagnostic, "clustering produced no clusters (all points are noise)");
  }
  return describe_units(score(cluster_counts, params), prepared.counted.vocabulary, params.top_k);
}

json topics_to_json(std::span<const TopicDescription> topics, const ScoringParams& params,
                    std::span<const std::size_t> cluster_sizes) {
  json list = json::array();
  for (std::size_t i = 0; i < topics.size(); ++i) {
    json keywords = json::array();
    for (const auto& kw : topics[i].keywords) {
      keywords.push_back({{"term", kw.term}, {"score", kw.score}});
    }
    json entry = {{"cluster_id", topics[i].cluster_id}, {"keywords", keywords}};
    if (i < cluster_sizes.size()) entry["size"] = cluster_sizes[i];
    list.push_back(std::move(entry));
  }
  json j = {{"schema_version", kSchemaVersion},
            {"scheme", to_string(params.scheme)},
            {"top_k", params.top_k},
            {"topics", list}};
  if (params.scheme == Scheme::tf_rdf) j["theta"] = params.theta;
  return j;
}

std::vector<TopicDescription> topics_from_json(const json& j) {
  std::vector<TopicDescription> topics;
  try {
    for (const auto& t : j.at("topics")) {
      TopicDescription topic;
      topic.cluster_id = t.at("cluster_id").get<int>();
      for (const auto& kw : t.at("keywords")) {
        topic.keywords.push_back({kw.at("term").get<std::string>(), kw.at("score").get<double>()});
      }
      topics.push_back(std::move(topic));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("topics file: ") + e.what());
  }
  return topics;
}

void write_assignments_csv(const fs::path& path, std::span<const std::string> ids,
                           const ClusterAssignment& assignment) {
  if (ids.size() != assignment.size()) {
    fail(ErrorKind::alignment, "ids and labels differ in length");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << "doc_id,label\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << csv_field(ids[i]) << ',' << assignment[i] << '\n';
}

ClusterAssignment read_assignments_csv(const fs::path& path, std::span<const std::string> ids) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("doc_id,label", 0) != 0) {
    fail(ErrorKind::parse, path.string() + ": expected header doc_id,label");
  }
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      fail(ErrorKind::parse, path.string() + ": line " + std::to_string(line_no) + " has no label");
    }
    std::string id = line.substr(0, comma);
    if (id.size() >= 2 && id.front() == '"' && id.back() == '"') {
      std::string unq;
      for (std::size_t i = 1; i + 1 < id.size(); ++i) {
        if (id[i] == '"' && i + 2 < id.size() && id[i + 1] == '"') ++i;
        unq += id[i];
      }
      id = unq;
    }
    const std::size_t row = labels.size();
    if (row >= ids.size() || ids[row] != id) {
      fail(ErrorKind::alignment, path.string() + ": line " + std::to_string(line_no) +
                                     " has id '" + id + "', expected '" +
                                     (row < ids.size() ? ids[row] : std::string("<end>")) + "'");
    }
    try {
      labels.push_back(std::stoi(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorKind::parse, path.string() + ": bad label on line " + std::to_string(line_no));
    }
  }
  if (labels.size() != ids.size()) {
    fail(ErrorKind::alignment, path.string() + " has " + std::to_string(labels.size()) +
                                   " rows for " + std::to_string(ids.size()) + " documents");
  }
  return ClusterAssignment(std::move(labels), true);
}

RunManifest run(const RunConfig& config) {
  auto prepared = prepare(config);
  auto& manifest = prepared.manifest;
  const auto ids = prepared.corpus.ids();

  auto topics = stage(manifest, "describe", [&] { return describe_clusters(prepared, config.scoring); });

  std::optional<Eigen::MatrixXd> projection;
  if (config.export_projection) {
    projection = stage(manifest, "project", [&]() -> std::optional<Eigen::MatrixXd> {
      if (config.projection_2d) {
        manifest.input_digests["projection_2d"] = sha256_file(*config.projection_2d);
        auto m = load_aligned(*config.projection_2d, prepared.corpus);
        if (m.cols() != 2) fail(ErrorKind::validation, "projection file must have 2 columns");
        return m;
      }
      if (prepared.embeddings.rows() < 2 || prepared.embeddings.dim() < 2) return std::nullopt;
      return pca_fit_transform(prepared.embeddings.values, 2).projected;
    });
  }

  std::optional<EvaluationReport> report;
  const bool have_gold = prepared.corpus.has_gold_labels();
  if (config.evaluate && (have_gold || config.word_vectors)) {
    report = stage(manifest, "evaluate", [&] {
      EvaluationReport r;
      if (have_gold) {
        evaluate_partition(r, prepared.assignment, prepared.corpus.gold_labels(),
                           config.noise_policy, config.nmi_normalization);
      }
      if (config.word_vectors) {
        manifest.input_digests["word_vectors"] = sha256_file(*config.word_vectors);
        evaluate_topics(r, topics, load_word_vectors(*config.word_vectors));
      }
      r.configuration["scheme"] = to_string(config.scoring.scheme);
      r.configuration["algorithm"] = to_string(config.clustering.algorithm);
      r.configuration["top_k"] = config.scoring.top_k;
      if (config.scoring.scheme == Scheme::tf_rdf) r.configuration["theta"] = config.scoring.theta;
      r.configuration["seed"] = config.seed;
      return r;
    });
  }

  stage(manifest, "write", [&] {
    OutputStage out(config.output_dir);
    write_json(out.path("topics.json"),
               topics_to_json(topics, config.scoring, cluster_sizes(prepared.assignment)));
    write_assignments_csv(out.path("assignments.csv"), ids, prepared.assignment);
    write_histogram_csv(out.path("histogram.csv"),
                        term_frequency_histogram(prepared.counted.counts, config.histogram_edges));
    if (report) write_json(out.path("metrics.json"), report->to_json());
    if (projection) {
      export_projection(out.path("projection.csv"), ids, *projection, prepared.assignment);
    }
    const auto manifest_path = out.path("manifest.json");
    manifest.outputs = {"topics.json", "assignments.csv", "histogram.csv"};
    if (report) manifest.outputs.push_back("metrics.json");
    if (projection) manifest.outputs.push_back("projection.csv");
    manifest.outputs.push_back("manifest.json");
    write_json(manifest_path, manifest.to_json());
    out.commit();
  });
  return manifest;
}

std::vector<SchemeComparison> compare_schemes(const RunConfig& config,
                                              std::span<const Scheme> schemes) {
  if (schemes.empty()) fail(ErrorKind::validation, "no schemes to compare");
  if (!config.word_vectors) {
    throw StageError("config", Error(ErrorKind::validation, "compare needs word vectors"));
  }
  auto prepared = prepare(config);
  auto& manifest = prepared.manifest;
  const auto wv = stage(manifest, "word_vectors", [&] {
    manifest.input_digests["word_vectors"] = sha256_file(*config.word_vectors);
    return load_word_vectors(*config.word_vectors);
  });

  std::vector<SchemeComparison> rows;
  stage(manifest, "compare", [&] {
    for (auto scheme : schemes) {
      ScoringParams params = config.scoring;
      params.scheme = scheme;
      auto topics = describe_clusters(prepared, params);
      const auto pairwise = tc_pairwise(topics, wv);
      const auto centroid = tc_centroid(topics, wv);
      rows.push_back({scheme, pairwise.value, centroid.value, pairwise.coverage, std::move(topics)});
    }
  });

  stage(manifest, "write", [&] {
    OutputStage out(config.output_dir);
    json table = json::array();
    for (const auto& row : rows) {
      ScoringParams params = config.scoring;
      params.scheme = row.scheme;
      table.push_back({{"scheme", to_string(row.scheme)},
                       {"tc_pairwise", row.tc_pairwise},
                       {"tc_centroid", row.tc_centroid},
                       {"coverage", row.coverage},
                       {"topics", topics_to_json(row.topics, params, {})["topics"]}});
    }
    write_json(out.path("comparison.json"), {{"schema_version", kSchemaVersion},
                                             {"clusters", prepared.assignment.k()},
                                             {"theta", config.scoring.theta},
                                             {"top_k", config.scoring.top_k},
                                             {"rows", table}});
    manifest.outputs = {"comparison.json", "manifest.json"};
    write_json(out.path("manifest.json"), manifest.to_json());
    out.commit();
  });
  return rows;
}

ThetaSearchResult grid_search_theta(const RunConfig& config, std::span<const double> thetas) {
  if (!config.word_vectors) {
    throw StageError("config", Error(ErrorKind::validation, "grid search needs word vectors"));
  }
  auto prepared = prepare(config);
  auto& manifest = prepared.manifest;
  const auto wv = stage(manifest, "word_vectors", [&] {
    manifest.input_digests["word_vectors"] = sha256_file(*config.word_vectors);
    return load_word_vectors(*config.word_vectors);
  });
  auto result = stage(manifest, "grid_search", [&] {
    const auto cluster_counts = aggregate_by_cluster(prepared.counted.counts, prepared.assignment);
    return theta_grid_search(cluster_counts, prepared.counted.vocabulary, thetas, wv,
                             config.scoring.top_k);
  });
  stage(manifest, "write", [&] {
    OutputStage out(config.output_dir);
    json trials = json::array();
    for (const auto& t : result.trials) {
      trials.push_back({{"theta", t.theta}, {"tc_pairwise", t.coherence}, {"coverage", t.coverage}});
    }
    write_json(out.path("theta_search.json"), {{"schema_version", kSchemaVersion},
                                               {"best_theta", result.best_theta},
                                               {"top_k", config.scoring.top_k},
                                               {"trials", trials}});
    manifest.outputs = {"theta_search.json", "manifest.json"};
    write_json(out.path("manifest.json"), manifest.to_json());
    out.commit();
  });
  return result;
}

std::vector<HistogramBin> corpus_histogram(const RunConfig& config) {
  RunManifest manifest;
  auto corpus = stage(manifest, "ingest", [&] { return ingest_corpus(config.corpus, config.corpus_format); });
  auto counted = stage(manifest, "count", [&] { return build_counts(corpus, config.tokenizer); });
  auto bins = stage(manifest, "histogram", [&] {
    return term_frequency_histogram(counted.counts, config.histogram_edges);
  });
  stage(manifest, "write", [&] {
    OutputStage out(config.output_dir);
    write_histogram_csv(out.path("histogram.csv"), bins);
    out.commit();
  });
  return bins;
}

EvaluationReport evaluate_saved(const fs::path& corpus_path, CorpusFormat format,
                                const fs::path& assignments, const std::optional<fs::path>& topics,
                                const std::optional<fs::path>& word_vectors, NoisePolicy policy,
                                const fs::path& out_dir) {
  RunManifest manifest;
  auto corpus = stage(manifest, "ingest", [&] { return ingest_corpus(corpus_path, format); });
  EvaluationReport report;
  stage(manifest, "evaluate", [&] {
    const auto assignment = read_assignments_csv(assignments, corpus.ids());
    if (corpus.has_gold_labels()) {
      evaluate_partition(report, assignment, corpus.gold_labels(), policy);
    }
    if (topics && word_vectors) {
      const auto described = topics_from_json(read_json(*topics));
      evaluate_topics(report, described, load_word_vectors(*word_vectors));
    }
    if (!report.purity && !report.tc_pairwise) {
      fail(ErrorKind::diagnostic,
           "nothing to evaluate: corpus has no gold labels and no topics/word vectors were given");
    }
  });
  stage(manifest, "write", [&] {
    OutputStage out(out_dir);
    write_json(out.path("metrics.json"), report.to_json());
    out.commit();
  });
  return report;
}

}  // namespace clustopic
