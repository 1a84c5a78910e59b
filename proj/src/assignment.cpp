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

#include "clustopic/assignment.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "clustopic/error.hpp"

namespace clustopic {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::alignment: return "alignment error";
    case ErrorKind::diagnostic: return "diagnostic error";
    case ErrorKind::io: return "io error";
  }
  return "error";
}

ClusterAssignment::ClusterAssignment(std::vector<int> labels, bool allow_noise)
    : labels_(std::move(labels)), allow_noise_(allow_noise) {
  int max_label = -1;
  for (int label : labels_) {
    if (label < kNoise) {
      fail(ErrorKind::validation,
           "cluster label " + std::to_string(label) + " is below -1");
    }
    if (label == kNoise && !allow_noise_) {
      fail(ErrorKind::validation, "noise label in an assignment without noise");
    }
    max_label = std::max(max_label, label);
  }
  k_ = max_label + 1;
  std::vector<bool> seen(static_cast<std::size_t>(k_), false);
  for (int label : labels_) {
    if (label >= 0) seen[static_cast<std::size_t>(label)] = true;
  }
  for (int c = 0; c < k_; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      fail(ErrorKind::validation,
           "cluster labels are not contiguous: " + std::to_string(c) +
               " is missing below " + std::to_string(k_));
    }
  }
}

std::size_t ClusterAssignment::noise_count() const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), kNoise));
}

ClusterAssignment ClusterAssignment::canonical(std::span<const int> raw,
                                               bool allow_noise) {
  std::unordered_map<int, int> remap;
  std::vector<int> labels;
  labels.reserve(raw.size());
  for (int label : raw) {
    if (label < 0) {
      labels.push_back(kNoise);
      continue;
    }
    auto [it, inserted] = remap.try_emplace(label, static_cast<int>(remap.size()));
    labels.push_back(it->second);
  }
  return ClusterAssignment(std::move(labels), allow_noise);
}

}  // namespace clustopic
