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

// Python extension module clustopic._core.

#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "clustopic/clustering.hpp"
#include "clustopic/corpus.hpp"
#include "clustopic/embedding.hpp"
#include "clustopic/evaluation.hpp"
#include "clustopic/pipeline.hpp"
#include "clustopic/scoring.hpp"
#include "clustopic/version.hpp"

namespace py = pybind11;
using namespace clustopic;

namespace {

using Dense = std::vector<std::vector<std::uint64_t>>;

Eigen::MatrixXd to_eigen(const ScoreMatrix& s) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(s.rows()), static_cast<Eigen::Index>(s.cols()));
  for (std::size_t r = 0; r < s.rows(); ++r) {
    for (std::size_t c = 0; c < s.cols(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s.at(r, c);
    }
  }
  return out;
}

TermCountMatrix counts_of(const Dense& dense, bool per_cluster) {
  return TermCountMatrix::from_dense(dense, per_cluster ? RowKind::per_cluster : RowKind::per_document);
}

py::list keywords_of(const TopicDescription& t) {
  py::list out;
  for (const auto& kw : t.keywords) out.append(py::make_tuple(kw.term, kw.score));
  return out;
}

ContingencyTable table_of(const std::vector<int>& pred, const std::vector<int>& gold) {
  return contingency(pred, gold);
}

RunConfig config_of(const std::string& json_text, const std::string& base_dir) {
  return RunConfig::from_json(nlohmann::json::parse(json_text), base_dir);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Document clustering and cluster keyword extraction";
  m.attr("__version__") = kVersion;

  static py::handle error_type =
      py::exception<Error>(m, "ClustopicError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error_type(e.what());
      exc.attr("kind") = to_string(e.kind());
      if (auto* stage_error = dynamic_cast<const StageError*>(&e)) {
        exc.attr("stage") = stage_error->stage();
      }
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  // Corpus and counting.
  m.def(
      "tokenize",
      [](const std::string& text, bool lowercase, std::size_t min_length) {
        return tokenize(text, TokenizerConfig{lowercase, min_length, 1});
      },
      py::arg("text"), py::arg("lowercase") = true, py::arg("min_length") = 2);
  m.def(
      "build_counts",
      [](const std::vector<std::string>& texts, std::size_t min_length, std::size_t min_count) {
        std::vector<Document> docs;
        for (std::size_t i = 0; i < texts.size(); ++i) docs.push_back({std::to_string(i), texts[i], {}});
        const auto counted = build_counts(Corpus(std::move(docs)), {true, min_length, min_count});
        const auto terms = counted.vocabulary.terms();
        return py::make_tuple(std::vector<std::string>(terms.begin(), terms.end()),
                              counted.counts.to_dense());
      },
      py::arg("texts"), py::arg("min_length") = 2, py::arg("min_count") = 1,
      "Returns (vocabulary, dense per-document counts).");

  // Scoring. Count matrices are lists of rows of non-negative integers.
  m.def("tf_idf", [](const Dense& c) { return to_eigen(tf_idf(counts_of(c, false))); });
  m.def("c_tf_idf", [](const Dense& c) { return to_eigen(c_tf_idf(counts_of(c, true))); });
  m.def(
      "tf_rdf",
      [](const Dense& c, double theta) { return to_eigen(tf_rdf(counts_of(c, true), theta)); },
      py::arg("counts"), py::arg("theta") = kDefaultTheta);
  m.def("rdf", &rdf, py::arg("theta"), py::arg("n_outside"));
  m.def(
      "top_terms",
      [](const Dense& c, const std::vector<std::string>& terms, const std::string& scheme,
         double theta, std::size_t k) {
        ScoringParams p{parse_scheme(scheme), theta, k};
        p.validate();
        const auto scores = score(counts_of(c, true), p);
        py::list out;
        for (const auto& t : describe_units(scores, Vocabulary(terms), k)) out.append(keywords_of(t));
        return out;
      },
      py::arg("counts"), py::arg("terms"), py::arg("scheme") = "tf_rdf",
      py::arg("theta") = kDefaultTheta, py::arg("k") = 10,
      "Top-k (term, score) lists for every row; terms must be sorted ascending.");
  m.def(
      "histogram",
      [](const Dense& c, const std::vector<std::uint64_t>& edges) {
        py::list out;
        for (const auto& b : term_frequency_histogram(counts_of(c, false), edges)) {
          out.append(py::make_tuple(b.low, b.high ? py::cast(*b.high) : py::none(), b.term_count));
        }
        return out;
      },
      py::arg("counts"), py::arg("edges"));

  // Embeddings.
  m.def(
      "load_embeddings",
      [](const std::filesystem::path& path) {
        auto e = load_embeddings(path);
        return py::make_tuple(e.ids, e.values);
      },
      py::arg("path"), "Returns (ids, matrix) from an interchange file.");
  m.def(
      "save_embeddings",
      [](const std::filesystem::path& path, std::vector<std::string> ids, Eigen::MatrixXd values) {
        save_embeddings(path, EmbeddingMatrix{std::move(ids), std::move(values)});
      },
      py::arg("path"), py::arg("ids"), py::arg("values"));
  m.def(
      "pca",
      [](const Eigen::MatrixXd& x, std::size_t out_dim) {
        auto r = pca_fit_transform(x, out_dim);
        return py::make_tuple(r.projected, r.explained_variance_ratio);
      },
      py::arg("x"), py::arg("out_dim"), "Returns (projected, explained_variance_ratio).");
  m.def(
      "cosine_similarity",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return cosine_similarity(a, b);
      });

  // Clustering.
  m.def(
      "kmeans",
      [](const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed, std::size_t max_iter,
         double tol, std::size_t n_init) {
        auto r = kmeans(x, {k, max_iter, tol, seed, n_init});
        py::dict out;
        out["labels"] = std::vector<int>(r.assignment.labels().begin(), r.assignment.labels().end());
        out["centroids"] = r.centroids;
        out["inertia"] = r.inertia;
        out["iterations"] = r.iterations;
        out["inertia_history"] = r.inertia_history;
        return out;
      },
      py::arg("x"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iter") = 300,
      py::arg("tol") = 1e-4, py::arg("n_init") = 1);
  m.def(
      "kmedoids",
      [](const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
        auto r = kmedoids(x, {k, seed, max_iter});
        py::dict out;
        out["labels"] = std::vector<int>(r.assignment.labels().begin(), r.assignment.labels().end());
        out["medoids"] = r.medoids;
        out["total_distance"] = r.total_distance;
        return out;
      },
      py::arg("x"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iter") = 300);
  m.def(
      "hdbscan",
      [](const Eigen::MatrixXd& x, std::size_t min_cluster_size, std::optional<std::size_t> min_samples,
         bool allow_single_cluster) {
        auto r = hdbscan(x, {min_cluster_size, min_samples, allow_single_cluster});
        return std::vector<int>(r.assignment.labels().begin(), r.assignment.labels().end());
      },
      py::arg("x"), py::arg("min_cluster_size") = 5, py::arg("min_samples") = py::none(),
      py::arg("allow_single_cluster") = true, "Labels, with -1 for noise.");

  // Partition metrics on integer label lists.
  m.def("purity", [](const std::vector<int>& p, const std::vector<int>& g) { return purity(table_of(p, g)); },
        py::arg("pred"), py::arg("gold"));
  m.def("rand_index", [](const std::vector<int>& p, const std::vector<int>& g) { return rand_index(table_of(p, g)); },
        py::arg("pred"), py::arg("gold"));
  m.def("adjusted_rand", [](const std::vector<int>& p, const std::vector<int>& g) { return adjusted_rand(table_of(p, g)); },
        py::arg("pred"), py::arg("gold"));
  m.def(
      "nmi",
      [](const std::vector<int>& p, const std::vector<int>& g, const std::string& normalization) {
        if (normalization != "geometric" && normalization != "arithmetic") {
          fail(ErrorKind::validation, "unknown normalization '" + normalization + "'");
        }
        return nmi(table_of(p, g), normalization == "geometric" ? NmiNormalization::geometric
                                                                : NmiNormalization::arithmetic);
      },
      py::arg("pred"), py::arg("gold"), py::arg("normalization") = "geometric");
  m.def("ami", [](const std::vector<int>& p, const std::vector<int>& g) { return ami(table_of(p, g)); },
        py::arg("pred"), py::arg("gold"));

  // Pipeline. Configs cross the boundary as JSON text.
  m.def(
      "run",
      [](const std::string& config_json, const std::string& base_dir) {
        return run(config_of(config_json, base_dir)).to_json().dump();
      },
      py::arg("config_json"), py::arg("base_dir") = "", "Returns the manifest as JSON text.");
  m.def(
      "compare_schemes",
      [](const std::string& config_json, const std::vector<std::string>& schemes,
         const std::string& base_dir) {
        std::vector<Scheme> parsed;
        for (const auto& s : schemes) parsed.push_back(parse_scheme(s));
        py::list out;
        for (const auto& row : compare_schemes(config_of(config_json, base_dir), parsed)) {
          py::dict d;
          d["scheme"] = to_string(row.scheme);
          d["tc_pairwise"] = row.tc_pairwise;
          d["tc_centroid"] = row.tc_centroid;
          d["coverage"] = row.coverage;
          py::list topics;
          for (const auto& t : row.topics) topics.append(keywords_of(t));
          d["topics"] = topics;
          out.append(d);
        }
        return out;
      },
      py::arg("config_json"), py::arg("schemes"), py::arg("base_dir") = "");
}
