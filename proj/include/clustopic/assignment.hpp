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

#include <cstddef>
#include <span>
#include <vector>

namespace clustopic {

inline constexpr int kNoise = -1;

/// Per-document cluster labels. Non-noise labels always cover 0..k-1 with no
/// gaps; kNoise marks points that belong to no cluster.
class ClusterAssignment {
 public:
  ClusterAssignment() = default;

  /// Throws Error(validation) if labels are not contiguous, or contain kNoise
  /// while allow_noise is false, or contain anything below kNoise.
  ClusterAssignment(std::vector<int> labels, bool allow_noise);

  std::span<const int> labels() const noexcept { return labels_; }
  int operator[](std::size_t i) const { return labels_[i]; }
  std::size_t size() const noexcept { return labels_.size(); }
  int k() const noexcept { return k_; }
  bool allows_noise() const noexcept { return allow_noise_; }
  std::size_t noise_count() const noexcept;

  /// Relabels clusters in order of their first member's index.
  static ClusterAssignment canonical(std::span<const int> raw, bool allow_noise);

 private:
  std::vector<int> labels_;
  int k_ = 0;
  bool allow_noise_ = false;
};

}  // namespace clustopic
