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

#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "clustopic/pipeline.hpp"
#include "error_kind.hpp"
#include "synthetic.hpp"

namespace clustopic {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::error_kind;

const fs::path kData = CLUSTOPIC_TEST_DATA;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const fs::path& p) { return json::parse(slurp(p)); }

RunConfig tiny_config(const fs::path& out) {
  auto c = RunConfig::load(kData / "tiny_config.json");
  c.output_dir = out;
  return c;
}

TEST(RunConfig, LoadResolvesRelativePaths) {
  const auto c = RunConfig::load(kData / "tiny_config.json");
  EXPECT_EQ(c.corpus, kData / "tiny_corpus.jsonl");
  EXPECT_EQ(c.embeddings, kData / "tiny_embeddings.emb");
  EXPECT_EQ(c.word_vectors, kData / "tiny_vectors.txt");
  EXPECT_EQ(c.clustering.k, 2u);
  EXPECT_EQ(c.scoring.top_k, 5u);
  EXPECT_EQ(c.seed, 3u);
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.corpus = "/data/c.jsonl";
  c.embeddings = "/data/e.emb";
  c.clustering.algorithm = Algorithm::hdbscan;
  c.clustering.min_samples = 4;
  c.scoring.scheme = Scheme::c_tf_idf;
  c.noise_policy = NoisePolicy::as_cluster;
  c.nmi_normalization = NmiNormalization::arithmetic;
  c.histogram_edges = {5, 50};
  c.seed = 77;
  EXPECT_EQ(RunConfig::from_json(c.to_json()).to_json(), c.to_json());
}

TEST(RunConfig, Validation) {
  RunConfig c;
  EXPECT_EQ(error_kind([&] { c.validate(); }), ErrorKind::validation);
  c.corpus = "x";
  c.embeddings = "y";
  c.scoring.theta = -1;
  EXPECT_EQ(error_kind([&] { c.validate(); }), ErrorKind::validation);
  EXPECT_EQ(error_kind([] { RunConfig::from_json(json::array()); }), ErrorKind::parse);
  EXPECT_EQ(error_kind([] { RunConfig::from_json({{"scoring", {{"scheme", "okapi"}}}}); }),
            ErrorKind::validation);
}

TEST(Run, WritesEveryOutput) {
  const auto out = synth::scratch_dir("run-outputs");
  auto config = tiny_config(out);
  config.scoring.theta = 5000;
  const auto manifest = run(config);
  for (const char* name : {"topics.json", "assignments.csv", "histogram.csv", "metrics.json",
                           "projection.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  EXPECT_EQ(manifest.outputs.size(), 6u);
  const auto topics = read_json_file(out / "topics.json");
  EXPECT_EQ(topics["topics"].size(), 2u);
  EXPECT_EQ(topics["scheme"], "tf_rdf");
  EXPECT_EQ(topics["topics"][0]["keywords"].size(), 5u);

  const auto metrics = read_json_file(out / "metrics.json");
  EXPECT_EQ(metrics["purity"], 1.0);
  EXPECT_TRUE(metrics["tc_pairwise"].is_number());

  const auto m = read_json_file(out / "manifest.json");
  EXPECT_EQ(m["reduction"], "none");
  EXPECT_EQ(m["input_digests"]["corpus"], sha256_file(kData / "tiny_corpus.jsonl"));
  EXPECT_EQ(m["input_digests"]["corpus"].get<std::string>().size(), 64u);
  EXPECT_EQ(m["config"]["seed"], 3);

  const auto assignments = slurp(out / "assignments.csv");
  EXPECT_EQ(assignments.rfind("doc_id,label\ncooking-00,0\n", 0), 0u);
  for (const auto& entry : fs::directory_iterator(out)) {
    EXPECT_EQ(entry.path().filename().string().rfind(".staging", 0), std::string::npos);
  }
  fs::remove_all(out);
}

TEST(Run, TopicsSeparateThePlantedThemes) {
  const auto out = synth::scratch_dir("run-themes");
  run(tiny_config(out));
  const auto topics = read_json_file(out / "topics.json")["topics"];
  const std::vector<std::string> fillers{"the", "of", "and", "to", "in", "is"};
  for (const auto& t : topics) {
    for (const auto& kw : t["keywords"]) {
      EXPECT_EQ(std::count(fillers.begin(), fillers.end(), kw["term"].get<std::string>()), 0);
    }
  }
  EXPECT_GT(read_json_file(out / "metrics.json")["tc_pairwise"].get<double>(), 0.85);
  fs::remove_all(out);
}

TEST(Run, SameSeedIsByteIdentical) {
  const auto a = synth::scratch_dir("run-det-a"), b = synth::scratch_dir("run-det-b");
  run(tiny_config(a));
  run(tiny_config(b));
  EXPECT_EQ(slurp(a / "topics.json"), slurp(b / "topics.json"));
  EXPECT_EQ(slurp(a / "assignments.csv"), slurp(b / "assignments.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, HdbscanWithoutReducedFileUsesPcaToFive) {
  const auto out = synth::scratch_dir("run-hdbscan");
  auto c = tiny_config(out);
  c.clustering.algorithm = Algorithm::hdbscan;
  c.clustering.min_cluster_size = 3;
  const auto manifest = run(c);
  EXPECT_EQ(manifest.reduction, "pca");
  EXPECT_EQ(c.clustering.reduce_dims, 5u);
  const auto prepared = prepare(c);
  ASSERT_TRUE(prepared.reduced.has_value());
  EXPECT_EQ(prepared.reduced->cols(), 5);
  fs::remove_all(out);
}

TEST(Run, HdbscanUsesExternalReducedFile) {
  const auto out = synth::scratch_dir("run-hdbscan-ext");
  auto c = tiny_config(out);
  c.clustering.algorithm = Algorithm::hdbscan;
  c.clustering.min_cluster_size = 3;
  c.reduced = kData / "tiny_reduced.emb";
  c.projection_2d = kData / "tiny_projection.emb";
  const auto manifest = run(c);
  EXPECT_EQ(manifest.reduction, "external");
  EXPECT_TRUE(manifest.input_digests.count("reduced"));
  EXPECT_TRUE(manifest.input_digests.count("projection_2d"));
  fs::remove_all(out);
}

TEST(Run, FailureIsStageTaggedAndLeavesNoOutputs) {
  const auto out = synth::scratch_dir("run-fail");
  auto c = tiny_config(out);
  c.corpus = kData / "tiny_vectors.txt";
  try {
    run(c);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_EQ(std::string(e.what()).rfind("[ingest] parse error:", 0), 0u) << e.what();
  }
  EXPECT_TRUE(fs::is_empty(out));
  fs::remove_all(out);
}

TEST(Run, MisalignedEmbeddingsFailInEmbeddingStage) {
  const auto dir = synth::scratch_dir("run-misaligned");
  EmbeddingMatrix m;
  m.ids = {"x", "y"};
  m.values = Eigen::MatrixXd::Zero(2, 3);
  save_embeddings(dir / "e.emb", m);
  auto c = tiny_config(dir / "out");
  c.embeddings = dir / "e.emb";
  try {
    run(c);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "embeddings");
    EXPECT_EQ(e.kind(), ErrorKind::alignment);
  }
  fs::remove_all(dir);
}

TEST(Compare, ShapeAndFile) {
  const auto out = synth::scratch_dir("compare");
  const std::vector<Scheme> all{Scheme::tf_rdf, Scheme::c_tf_idf, Scheme::tf_idf};
  const auto rows = compare_schemes(tiny_config(out), all);
  ASSERT_EQ(rows.size(), 3u);
  const auto j = read_json_file(out / "comparison.json");
  ASSERT_EQ(j["rows"].size(), 3u);
  for (const auto& row : j["rows"]) {
    EXPECT_TRUE(row.contains("tc_pairwise"));
    EXPECT_TRUE(row.contains("tc_centroid"));
  }
  const std::vector<Scheme> one{Scheme::c_tf_idf};
  EXPECT_EQ(compare_schemes(tiny_config(out), one).size(), 1u);
  fs::remove_all(out);
}

TEST(Compare, PlantedCorpusFavoursTfRdf) {
  const auto dir = synth::scratch_dir("compare-planted");
  const auto planted = synth::planted_corpus();
  synth::write_jsonl(dir / "corpus.jsonl", planted.documents);
  save_embeddings(dir / "emb.emb", planted.embeddings);
  synth::write_word_vectors(dir / "wv.txt", synth::planted_word_vectors());
  RunConfig c;
  c.corpus = dir / "corpus.jsonl";
  c.embeddings = dir / "emb.emb";
  c.word_vectors = dir / "wv.txt";
  c.clustering.k = 4;
  c.output_dir = dir / "out";
  const std::vector<Scheme> schemes{Scheme::tf_rdf, Scheme::c_tf_idf};
  const auto rows = compare_schemes(c, schemes);
  EXPECT_GE(rows[0].tc_pairwise, rows[1].tc_pairwise);
  fs::remove_all(dir);
}

TEST(Compare, NeedsWordVectors) {
  auto c = tiny_config(synth::scratch_dir("compare-nowv"));
  c.word_vectors.reset();
  const std::vector<Scheme> one{Scheme::tf_rdf};
  EXPECT_THROW(compare_schemes(c, one), StageError);
}

TEST(GridSearch, WritesTrials) {
  const auto out = synth::scratch_dir("grid");
  const double thetas[] = {2000, 5000};
  const auto r = grid_search_theta(tiny_config(out), thetas);
  EXPECT_EQ(r.trials.size(), 2u);
  EXPECT_EQ(read_json_file(out / "theta_search.json")["trials"].size(), 2u);
  fs::remove_all(out);
}

TEST(Histogram, CorpusOnly) {
  const auto out = synth::scratch_dir("hist");
  auto c = tiny_config(out);
  c.histogram_edges = {10, 20};
  const auto bins = corpus_histogram(c);
  ASSERT_EQ(bins.size(), 3u);
  std::size_t terms = 0;
  for (const auto& b : bins) terms += b.term_count;
  EXPECT_EQ(terms, 18u);  // 12 topical words and 6 fillers
  EXPECT_TRUE(fs::exists(out / "histogram.csv"));
  fs::remove_all(out);
}

TEST(EvaluateSaved, MatchesRunMetrics) {
  const auto out = synth::scratch_dir("eval-saved");
  run(tiny_config(out));
  const auto report =
      evaluate_saved(kData / "tiny_corpus.jsonl", CorpusFormat::jsonl, out / "assignments.csv",
                     out / "topics.json", kData / "tiny_vectors.txt", NoisePolicy::exclude, out / "eval");
  const auto from_run = read_json_file(out / "metrics.json");
  EXPECT_EQ(report.purity, from_run["purity"].get<double>());
  EXPECT_NEAR(*report.tc_pairwise, from_run["tc_pairwise"].get<double>(), 1e-12);
  EXPECT_TRUE(fs::exists(out / "eval" / "metrics.json"));
  fs::remove_all(out);
}

TEST(Assignments, ReadChecksIds) {
  const auto dir = synth::scratch_dir("assign-csv");
  const std::vector<std::string> ids{"a", "b,c"};
  write_assignments_csv(dir / "a.csv", ids, ClusterAssignment({0, -1}, true));
  const auto back = read_assignments_csv(dir / "a.csv", ids);
  EXPECT_EQ(back[1], kNoise);
  const std::vector<std::string> other{"a", "z"};
  EXPECT_EQ(error_kind([&] { read_assignments_csv(dir / "a.csv", other); }), ErrorKind::alignment);
  fs::remove_all(dir);
}

TEST(Topics, JsonRoundTrip) {
  std::vector<TopicDescription> topics(2);
  topics[0].cluster_id = 0;
  topics[0].keywords = {{"alpha", 2.5}, {"beta", 1.0}};
  topics[1].cluster_id = 1;
  topics[1].keywords = {{"gamma", 0.5}};
  const auto back = topics_from_json(topics_to_json(topics, ScoringParams{}, {}));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].keywords, topics[0].keywords);
  EXPECT_EQ(back[1].cluster_id, 1);
}

#ifdef CLUSTOPIC_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(CLUSTOPIC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, RunCompareHistogramEval) {
  const auto out = synth::scratch_dir("cli");
  const std::string cfg = (kData / "tiny_config.json").string();
  EXPECT_EQ(run_cli("run --config " + cfg + " --out " + (out / "run").string()), 0);
  EXPECT_TRUE(fs::exists(out / "run" / "topics.json"));
  EXPECT_EQ(run_cli("compare --config " + cfg + " --out " + (out / "cmp").string()), 0);
  EXPECT_TRUE(fs::exists(out / "cmp" / "comparison.json"));
  EXPECT_EQ(run_cli("histogram --config " + cfg + " --bins 5 50 --out " + (out / "hist").string()), 0);
  EXPECT_EQ(run_cli("grid-search-theta --config " + cfg + " --thetas 2000 5000 --out " +
                    (out / "grid").string()),
            0);
  EXPECT_EQ(run_cli("eval --corpus " + (kData / "tiny_corpus.jsonl").string() + " --assignments " +
                    (out / "run" / "assignments.csv").string() + " --out " + (out / "eval").string()),
            0);
  EXPECT_TRUE(fs::exists(out / "eval" / "metrics.json"));
  fs::remove_all(out);
}

TEST(Cli, FlagsOverrideConfig) {
  const auto out = synth::scratch_dir("cli-override");
  const std::string cfg = (kData / "tiny_config.json").string();
  EXPECT_EQ(run_cli("run --config " + cfg + " --scheme c-tf-idf --top-k 3 --out " + out.string()), 0);
  const auto topics = read_json_file(out / "topics.json");
  EXPECT_EQ(topics["scheme"], "c_tf_idf");
  EXPECT_EQ(topics["topics"][0]["keywords"].size(), 3u);
  fs::remove_all(out);
}

TEST(Cli, ErrorsExitNonZero) {
  EXPECT_NE(run_cli("run --corpus /nonexistent.jsonl --embeddings /nonexistent.emb"), 0);
  EXPECT_NE(run_cli("frobnicate"), 0);
}
#endif

}  // namespace
}  // namespace clustopic
