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

#include "clustopic/embedding.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "clustopic/corpus.hpp"
#include "clustopic/error.hpp"
#include "csv.hpp"

namespace clustopic {

namespace {

void read_exact(std::istream& in, void* dst, std::size_t n, const char* what) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    fail(ErrorKind::parse, std::string("embedding file truncated while reading ") + what);
  }
}

template <typename T>
T read_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(T)> buf{};
  read_exact(in, buf.data(), buf.size(), what);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return static_cast<T>(v);
}

template <typename T>
void write_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> buf{};
  const auto v = static_cast<std::uint64_t>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf.data(), buf.size());
}

}  // namespace

EmbeddingMatrix read_embeddings(std::istream& in) {
  char magic[4];
  read_exact(in, magic, 4, "magic");
  if (std::memcmp(magic, kEmbeddingMagic, 4) != 0) {
    fail(ErrorKind::parse, "not an embedding file (bad magic)");
  }
  const auto n_rows = read_le<std::uint32_t>(in, "row count");
  const auto dim = read_le<std::uint32_t>(in, "dimension");

  EmbeddingMatrix m;
  m.ids.reserve(n_rows);
  for (std::uint32_t r = 0; r < n_rows; ++r) {
    const auto len = read_le<std::uint16_t>(in, "id length");
    std::string id(len, '\0');
    read_exact(in, id.data(), len, "id");
    m.ids.push_back(std::move(id));
  }

  m.values.resize(n_rows, dim);
  for (std::uint32_t r = 0; r < n_rows; ++r) {
    for (std::uint32_t c = 0; c < dim; ++c) {
      const auto bits = read_le<std::uint32_t>(in, "values");
      const float f = std::bit_cast<float>(bits);
      if (!std::isfinite(f)) {
        fail(ErrorKind::validation, "non-finite value in embedding row " + std::to_string(r) +
                                        " (id '" + m.ids[r] + "')");
      }
      m.values(r, c) = f;
    }
  }
  return m;
}

void write_embeddings(std::ostream& out, const EmbeddingMatrix& m) {
  if (m.ids.size() != m.rows()) {
    fail(ErrorKind::validation, "embedding ids and rows disagree");
  }
  out.write(kEmbeddingMagic, 4);
  write_le(out, static_cast<std::uint32_t>(m.rows()));
  write_le(out, static_cast<std::uint32_t>(m.dim()));
  for (const auto& id : m.ids) {
    if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
      fail(ErrorKind::validation, "document id too long for the interchange format");
    }
    write_le(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      write_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(m.values(r, c))));
    }
  }
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                std::optional<std::size_t> expected_rows) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open embedding file " + path.string());
  auto m = read_embeddings(in);
  if (expected_rows && m.rows() != *expected_rows) {
    fail(ErrorKind::alignment, "embedding file " + path.string() + " has " +
                                   std::to_string(m.rows()) + " rows, expected " +
                                   std::to_string(*expected_rows));
  }
  return m;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  write_embeddings(out, m);
}

void check_alignment(const EmbeddingMatrix& m, const Corpus& corpus) {
  if (m.rows() != corpus.size()) {
    fail(ErrorKind::alignment, "embeddings have " + std::to_string(m.rows()) +
                                   " rows but the corpus has " + std::to_string(corpus.size()) +
                                   " documents");
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (m.ids[i] != corpus[i].id) {
      fail(ErrorKind::alignment, "embedding row " + std::to_string(i) + " has id '" + m.ids[i] +
                                     "' but document " + std::to_string(i) + " is '" +
                                     corpus[i].id + "'");
    }
  }
}

void WordVectorStore::insert(std::string term, std::span<const double> vec) {
  if (vec.size() != dim_) {
    fail(ErrorKind::validation, "word vector for '" + term + "' has width " +
                                    std::to_string(vec.size()) + ", store width is " +
                                    std::to_string(dim_));
  }
  if (auto it = index_.find(term); it != index_.end()) {
    std::copy(vec.begin(), vec.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second));
    return;
  }
  index_.emplace(std::move(term), data_.size());
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::optional<std::span<const double>> WordVectorStore::find(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_).subspan(it->second, dim_);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> parse_real(std::string_view s) {
  std::string buf(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_unsigned_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

WordVectorStore parse_word_vectors(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> dim;
  WordVectorStore store;
  std::vector<double> vec;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (first) {
      first = false;
      if (fields.size() == 2 && is_unsigned_integer(fields[0]) && is_unsigned_integer(fields[1])) {
        dim = static_cast<std::size_t>(std::stoull(std::string(fields[1])));
        store = WordVectorStore(*dim);
        continue;
      }
    }
    const std::size_t width = fields.size() - 1;
    if (width == 0) {
      fail(ErrorKind::validation, "line " + std::to_string(line_no) + ": term without a vector");
    }
    if (!dim) {
      dim = width;
      store = WordVectorStore(width);
    }
    if (width != *dim) {
      fail(ErrorKind::validation, "line " + std::to_string(line_no) + ": vector width " +
                                      std::to_string(width) + " differs from " +
                                      std::to_string(*dim));
    }
    vec.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = parse_real(fields[i]);
      if (!v) {
        fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad number '" +
                                   std::string(fields[i]) + "'");
      }
      vec.push_back(*v);
    }
    store.insert(std::string(fields[0]), vec);
  }
  return store;
}

WordVectorStore load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open word-vector file " + path.string());
  return parse_word_vectors(in);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::validation, "cosine similarity of vectors with different widths");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

Eigen::MatrixXd PcaResult::reconstruct() const {
  Eigen::MatrixXd x = projected * components.transpose();
  x.rowwise() += mean;
  return x;
}

PcaResult pca_fit_transform(const Eigen::MatrixXd& x, std::size_t out_dim) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto dim = static_cast<std::size_t>(x.cols());
  if (n < 2) fail(ErrorKind::validation, "PCA needs at least two rows");
  if (out_dim == 0 || out_dim > std::min(n, dim)) {
    fail(ErrorKind::validation, "PCA output dimension " + std::to_string(out_dim) +
                                    " must be in 1.." + std::to_string(std::min(n, dim)));
  }

  PcaResult result;
  result.mean = x.colwise().mean();
  const Eigen::MatrixXd centred = x.rowwise() - result.mean;
  const Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::diagnostic, "covariance eigendecomposition did not converge");
  }

  // Eigen returns ascending eigenvalues; walk them from the top. Values under
  // the numerical-rank cutoff are treated as exact zeros.
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const double top = std::max(evals(evals.size() - 1), 0.0);
  const double cutoff = static_cast<double>(std::max(n, dim)) *
                        std::numeric_limits<double>::epsilon() * top;
  std::vector<double> variances(dim);
  double total = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double v = evals(static_cast<Eigen::Index>(dim - 1 - i));
    variances[i] = v > cutoff ? v : 0.0;
    total += variances[i];
  }

  result.components.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(out_dim));
  for (std::size_t j = 0; j < out_dim; ++j) {
    Eigen::VectorXd axis = solver.eigenvectors().col(static_cast<Eigen::Index>(dim - 1 - j));
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < axis.size(); ++i) {
      if (std::abs(axis(i)) > std::abs(axis(pivot))) pivot = i;
    }
    if (axis(pivot) < 0) axis = -axis;
    result.components.col(static_cast<Eigen::Index>(j)) = axis;
    result.explained_variance_ratio.push_back(total > 0.0 ? variances[j] / total : 0.0);
  }
  result.projected = centred * result.components;
  return result;
}

void export_projection(const std::filesystem::path& path, std::span<const std::string> ids,
                       const Eigen::MatrixXd& projected, const ClusterAssignment& assignment) {
  if (projected.cols() != 2) {
    fail(ErrorKind::validation, "projection export needs 2 columns, got " +
                                    std::to_string(projected.cols()));
  }
  if (ids.size() != static_cast<std::size_t>(projected.rows()) ||
      assignment.size() != ids.size()) {
    fail(ErrorKind::alignment, "projection rows, ids and labels disagree in length");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << "doc_id,x,y,cluster_label\n";
  char buf[64];
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << csv_field(ids[i]);
    for (Eigen::Index c = 0; c < 2; ++c) {
      std::snprintf(buf, sizeof(buf), ",%.9g", projected(static_cast<Eigen::Index>(i), c));
      out << buf;
    }
    out << ',' << assignment[i] << '\n';
  }
}

}  // namespace clustopic
