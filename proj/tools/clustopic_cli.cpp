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

// Batch front end: run, compare, histogram, grid-search-theta, eval.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clustopic/pipeline.hpp"
#include "clustopic/version.hpp"

namespace {

using namespace clustopic;

// Flags shared by every subcommand that runs the pipeline. A flag only
// overrides the config file when it was given on the command line.
struct RunFlags {
  std::string config_file;
  std::string corpus, format = "jsonl", embeddings, reduced, projection;
  std::string algo = "kmeans", scheme = "tf-rdf", word_vectors, out = "out";
  std::string noise_policy = "exclude";
  std::size_t k = 20, min_cluster_size = 5, min_samples = 5, top_k = 10, n_init = 1;
  double theta = kDefaultTheta;
  std::uint64_t seed = 0;
  bool no_eval = false;
  std::vector<std::uint64_t> bins;

  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    sub->add_option("--config", config_file, "JSON run config; flags override its keys")
        ->check(CLI::ExistingFile);
    sub->add_option("--corpus", corpus, "Corpus file (jsonl) or directory (plain_dir)");
    sub->add_option("--format", format, "Corpus format")
        ->check(CLI::IsMember({"jsonl", "plain_dir", "plain-dir"}));
    sub->add_option("--embeddings", embeddings, "Document embeddings (EMB1 interchange file)");
    sub->add_option("--reduced", reduced, "Precomputed reduced embeddings used by hdbscan");
    sub->add_option("--projection", projection, "Precomputed 2-d projection for projection.csv");
    sub->add_option("--algo", algo, "Clustering algorithm")
        ->check(CLI::IsMember({"kmeans", "kmedoids", "hdbscan"}));
    sub->add_option("--k", k, "Number of clusters (kmeans, kmedoids)")->check(CLI::PositiveNumber);
    sub->add_option("--n-init", n_init, "k-means restarts")->check(CLI::PositiveNumber);
    sub->add_option("--min-cluster-size", min_cluster_size, "HDBSCAN min_cluster_size")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
    sub->add_option("--min-samples", min_samples, "HDBSCAN min_samples")
        ->check(CLI::PositiveNumber);
    sub->add_option("--scheme", scheme, "Term scoring scheme")
        ->check(CLI::IsMember({"tf-idf", "c-tf-idf", "tf-rdf", "tf_idf", "c_tf_idf", "tf_rdf"}));
    sub->add_option("--theta", theta, "TF-RDF theta")->check(CLI::PositiveNumber);
    sub->add_option("--top-k", top_k, "Keywords per topic")->check(CLI::PositiveNumber);
    sub->add_option("--word-vectors", word_vectors, "word2vec text file for topic coherence");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--noise-policy", noise_policy, "Noise handling in partition metrics")
        ->check(CLI::IsMember({"exclude", "as_cluster", "as-cluster"}));
    sub->add_option("--bins", bins, "Histogram bin edges (ascending)");
    sub->add_flag("--no-eval", no_eval, "Skip the evaluation stage");
  }

  bool given(const char* name) const { return app->count(name) > 0; }

  RunConfig resolve() const {
    RunConfig c = config_file.empty() ? RunConfig{} : RunConfig::load(config_file);
    if (given("--corpus")) c.corpus = corpus;
    if (given("--format")) c.corpus_format = parse_corpus_format(format);
    if (given("--embeddings")) c.embeddings = embeddings;
    if (given("--reduced")) c.reduced = reduced;
    if (given("--projection")) c.projection_2d = projection;
    if (given("--algo")) c.clustering.algorithm = parse_algorithm(algo);
    if (given("--k")) c.clustering.k = k;
    if (given("--n-init")) c.clustering.n_init = n_init;
    if (given("--min-cluster-size")) c.clustering.min_cluster_size = min_cluster_size;
    if (given("--min-samples")) c.clustering.min_samples = min_samples;
    if (given("--scheme")) c.scoring.scheme = parse_scheme(scheme);
    if (given("--theta")) c.scoring.theta = theta;
    if (given("--top-k")) c.scoring.top_k = top_k;
    if (given("--word-vectors")) c.word_vectors = word_vectors;
    if (given("--seed")) c.seed = seed;
    if (given("--out")) c.output_dir = out;
    if (given("--noise-policy")) c.noise_policy = parse_noise_policy(noise_policy);
    if (given("--bins")) c.histogram_edges = bins;
    if (no_eval) c.evaluate = false;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document clustering and cluster keyword extraction"};
  app.set_version_flag("--version", std::string(clustopic::kVersion));
  app.require_subcommand(1);

  RunFlags run_flags, compare_flags, grid_flags, hist_flags;

  auto* run_cmd = app.add_subcommand("run", "Cluster, describe, evaluate and export");
  run_flags.attach(run_cmd);

  auto* compare_cmd = app.add_subcommand("compare", "Topic coherence of several scoring schemes");
  compare_flags.attach(compare_cmd);
  std::vector<std::string> schemes{"tf-rdf", "c-tf-idf", "tf-idf"};
  compare_cmd->add_option("--schemes", schemes, "Schemes to compare");

  auto* hist_cmd = app.add_subcommand("histogram", "Term frequency histogram for choosing theta");
  hist_flags.attach(hist_cmd);

  auto* grid_cmd = app.add_subcommand("grid-search-theta", "Pick theta by topic coherence");
  grid_flags.attach(grid_cmd);
  std::vector<double> thetas(std::begin(kDefaultThetaGrid), std::end(kDefaultThetaGrid));
  grid_cmd->add_option("--thetas", thetas, "Candidate theta values");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate saved assignments and topics");
  std::string eval_corpus, eval_format = "jsonl", eval_assignments, eval_topics, eval_wv;
  std::string eval_out = "out", eval_noise = "exclude";
  eval_cmd->add_option("--corpus", eval_corpus, "Corpus with gold labels")->required();
  eval_cmd->add_option("--format", eval_format, "Corpus format")
      ->check(CLI::IsMember({"jsonl", "plain_dir", "plain-dir"}));
  eval_cmd->add_option("--assignments", eval_assignments, "assignments.csv")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--topics", eval_topics, "topics.json")->check(CLI::ExistingFile);
  eval_cmd->add_option("--word-vectors", eval_wv, "word2vec text file")->check(CLI::ExistingFile);
  eval_cmd->add_option("--noise-policy", eval_noise, "Noise handling")
      ->check(CLI::IsMember({"exclude", "as_cluster", "as-cluster"}));
  eval_cmd->add_option("--out", eval_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto manifest = run(run_flags.resolve());
      for (const auto& name : manifest.outputs) std::cout << name << '\n';
    } else if (*compare_cmd) {
      std::vector<Scheme> parsed;
      for (const auto& s : schemes) parsed.push_back(parse_scheme(s));
      const auto rows = compare_schemes(compare_flags.resolve(), parsed);
      std::cout << "scheme\ttc_pairwise\ttc_centroid\tcoverage\n";
      for (const auto& row : rows) {
        std::cout << to_string(row.scheme) << '\t' << row.tc_pairwise << '\t' << row.tc_centroid
                  << '\t' << row.coverage << '\n';
      }
    } else if (*hist_cmd) {
      for (const auto& bin : corpus_histogram(hist_flags.resolve())) {
        std::cout << '[' << bin.low << ", " << (bin.high ? std::to_string(*bin.high) : "inf")
                  << ")\t" << bin.term_count << '\n';
      }
    } else if (*grid_cmd) {
      const auto result = grid_search_theta(grid_flags.resolve(), thetas);
      for (const auto& t : result.trials) {
        std::cout << t.theta << '\t' << t.coherence << '\n';
      }
      std::cout << "best_theta\t" << result.best_theta << '\n';
    } else if (*eval_cmd) {
      std::optional<std::filesystem::path> topics, wv;
      if (!eval_topics.empty()) topics = eval_topics;
      if (!eval_wv.empty()) wv = eval_wv;
      const auto report =
          evaluate_saved(eval_corpus, parse_corpus_format(eval_format), eval_assignments, topics,
                         wv, parse_noise_policy(eval_noise), eval_out);
      std::cout << report.to_json().dump(2) << '\n';
    }
  } catch (const StageError& e) {
    std::cerr << "clustopic: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "clustopic: [setup] " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "clustopic: [setup] " << e.what() << '\n';
    return 1;
  }
  return 0;
}
