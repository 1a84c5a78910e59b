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

#include "clustopic/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "clustopic/error.hpp"

namespace clustopic {

namespace fs = std::filesystem;

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  if (documents_.empty()) {
    fail(ErrorKind::validation, "corpus is empty");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : documents_) {
    if (doc.id.empty()) {
      fail(ErrorKind::validation, "document id is empty");
    }
    if (!seen.insert(doc.id).second) {
      fail(ErrorKind::validation, "duplicate document id '" + doc.id + "'");
    }
  }
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(documents_.size());
  for (const auto& doc : documents_) out.push_back(doc.id);
  return out;
}

bool Corpus::has_gold_labels() const noexcept {
  return std::all_of(documents_.begin(), documents_.end(),
                     [](const Document& d) { return d.gold_label.has_value(); });
}

std::vector<std::string> Corpus::gold_labels() const {
  if (!has_gold_labels()) {
    fail(ErrorKind::validation, "corpus has documents without gold labels");
  }
  std::vector<std::string> out;
  out.reserve(documents_.size());
  for (const auto& doc : documents_) out.push_back(*doc.gold_label);
  return out;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::jsonl;
  if (name == "plain_dir" || name == "plain-dir") return CorpusFormat::plain_dir;
  fail(ErrorKind::validation, "unknown corpus format '" + std::string(name) + "'");
}

Corpus parse_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::parse, where + ": " + e.what());
    }
    if (!record.is_object()) {
      fail(ErrorKind::parse, where + ": record is not a JSON object");
    }
    auto string_field = [&](const char* key, bool required) -> std::optional<std::string> {
      auto it = record.find(key);
      if (it == record.end() || it->is_null()) {
        if (required) fail(ErrorKind::parse, where + ": missing field '" + key + "'");
        return std::nullopt;
      }
      if (!it->is_string()) {
        fail(ErrorKind::parse, where + ": field '" + key + "' is not a string");
      }
      return it->get<std::string>();
    };
    Document doc;
    doc.id = *string_field("id", true);
    doc.text = *string_field("text", true);
    doc.gold_label = string_field("label", false);
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs));
}

Corpus ingest_corpus(const fs::path& path, CorpusFormat format) {
  if (format == CorpusFormat::jsonl) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open corpus file " + path.string());
    return parse_jsonl(in);
  }
  if (!fs::is_directory(path)) {
    fail(ErrorKind::io, "corpus directory " + path.string() + " does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + file.string());
    std::ostringstream text;
    text << in.rdbuf();
    docs.push_back(Document{file.filename().string(), text.str(), std::nullopt});
  }
  return Corpus(std::move(docs));
}

namespace {

bool is_token_byte(unsigned char c) noexcept {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c >= 0x80;
}

std::size_t code_points(std::string_view s) noexcept {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_token_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) break;
    std::string token(text.substr(start, i - start));
    if (code_points(token) < config.min_length) continue;
    if (config.lowercase) {
      for (char& c : token) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    if (!(terms_[i - 1] < terms_[i])) {
      fail(ErrorKind::validation, "vocabulary terms must be strictly ascending");
    }
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) return std::nullopt;
  return static_cast<std::size_t>(it - terms_.begin());
}

TermCountMatrix TermCountMatrix::from_dense(
    const std::vector<std::vector<std::uint64_t>>& dense, RowKind kind) {
  const std::size_t cols = dense.empty() ? 0 : dense.front().size();
  TermCountMatrix m(cols, kind);
  std::vector<CountEntry> row;
  for (const auto& values : dense) {
    if (values.size() != cols) {
      fail(ErrorKind::validation, "ragged dense count matrix");
    }
    row.clear();
    for (std::size_t c = 0; c < cols; ++c) {
      if (values[c] != 0) row.push_back({static_cast<std::uint32_t>(c), values[c]});
    }
    m.append_row(row);
  }
  return m;
}

void TermCountMatrix::append_row(std::span<const CountEntry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].term >= cols_ || entries[i].count == 0 ||
        (i > 0 && entries[i - 1].term >= entries[i].term)) {
      fail(ErrorKind::validation, "row entries must be sorted, in range and nonzero");
    }
  }
  entries_.insert(entries_.end(), entries.begin(), entries.end());
  row_ptr_.push_back(entries_.size());
}

std::span<const CountEntry> TermCountMatrix::row(std::size_t r) const {
  if (r >= rows()) fail(ErrorKind::validation, "row index out of range");
  return std::span<const CountEntry>(entries_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
}

std::uint64_t TermCountMatrix::count(std::size_t r, std::size_t c) const {
  if (c >= cols_) fail(ErrorKind::validation, "column index out of range");
  const auto entries = row(r);
  auto it = std::lower_bound(entries.begin(), entries.end(), c,
                             [](const CountEntry& e, std::size_t term) { return e.term < term; });
  return (it != entries.end() && it->term == c) ? it->count : 0;
}

std::uint64_t TermCountMatrix::row_total(std::size_t r) const {
  std::uint64_t sum = 0;
  for (const auto& e : row(r)) sum += e.count;
  return sum;
}

std::uint64_t TermCountMatrix::total() const {
  std::uint64_t sum = 0;
  for (const auto& e : entries_) sum += e.count;
  return sum;
}

std::vector<std::uint64_t> TermCountMatrix::column_totals() const {
  std::vector<std::uint64_t> totals(cols_, 0);
  for (const auto& e : entries_) totals[e.term] += e.count;
  return totals;
}

std::vector<std::uint64_t> TermCountMatrix::document_frequency() const {
  std::vector<std::uint64_t> df(cols_, 0);
  for (const auto& e : entries_) ++df[e.term];
  return df;
}

std::vector<std::vector<std::uint64_t>> TermCountMatrix::to_dense() const {
  std::vector<std::vector<std::uint64_t>> out(rows(), std::vector<std::uint64_t>(cols_, 0));
  for (std::size_t r = 0; r < rows(); ++r) {
    for (const auto& e : row(r)) out[r][e.term] = e.count;
  }
  return out;
}

CountedCorpus build_counts(const Corpus& corpus, const TokenizerConfig& config) {
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(corpus.size());
  std::map<std::string, std::uint64_t, std::less<>> totals;
  for (const auto& doc : corpus.documents()) {
    tokenized.push_back(tokenize(doc.text, config));
    for (const auto& token : tokenized.back()) ++totals[token];
  }

  std::vector<std::string> terms;
  for (const auto& [term, total] : totals) {
    if (total >= config.min_count) terms.push_back(term);
  }
  Vocabulary vocabulary(std::move(terms));

  TermCountMatrix counts(vocabulary.size(), RowKind::per_document);
  std::map<std::uint32_t, std::uint64_t> row_counts;
  std::vector<CountEntry> row;
  for (const auto& tokens : tokenized) {
    row_counts.clear();
    for (const auto& token : tokens) {
      if (auto idx = vocabulary.index_of(token)) ++row_counts[static_cast<std::uint32_t>(*idx)];
    }
    row.clear();
    for (const auto& [term, count] : row_counts) row.push_back({term, count});
    counts.append_row(row);
  }
  return {std::move(vocabulary), std::move(counts)};
}

TermCountMatrix aggregate_by_cluster(const TermCountMatrix& counts,
                                     const ClusterAssignment& assignment) {
  if (assignment.size() != counts.rows()) {
    fail(ErrorKind::validation,
         "assignment has " + std::to_string(assignment.size()) + " labels for " +
             std::to_string(counts.rows()) + " count rows");
  }
  const auto k = static_cast<std::size_t>(assignment.k());
  std::vector<std::vector<std::uint64_t>> sums(k, std::vector<std::uint64_t>(counts.cols(), 0));
  for (std::size_t r = 0; r < counts.rows(); ++r) {
    const int label = assignment[r];
    if (label == kNoise) continue;
    auto& target = sums[static_cast<std::size_t>(label)];
    for (const auto& e : counts.row(r)) target[e.term] += e.count;
  }
  TermCountMatrix out(counts.cols(), RowKind::per_cluster);
  std::vector<CountEntry> row;
  for (const auto& dense : sums) {
    row.clear();
    for (std::size_t c = 0; c < dense.size(); ++c) {
      if (dense[c] != 0) row.push_back({static_cast<std::uint32_t>(c), dense[c]});
    }
    out.append_row(row);
  }
  return out;
}

}  // namespace clustopic
