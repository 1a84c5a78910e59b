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
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "clustopic/assignment.hpp"

namespace clustopic {

enum class Algorithm { kmeans, kmedoids, hdbscan };

const char* to_string(Algorithm algo) noexcept;
Algorithm parse_algorithm(std::string_view name);

struct KMeansConfig {
  std::size_t k = 8;
  std::size_t max_iter = 300;
  double tol = 1e-4;  // on the largest centroid shift (Euclidean)
  std::uint64_t seed = 0;
  std::size_t n_init = 1;  // restarts; the lowest inertia wins
};

struct KMeansResult {
  ClusterAssignment assignment;
  Eigen::MatrixXd centroids;  // k x dim, row c is the centroid of label c
  double inertia = 0.0;
  std::size_t iterations = 0;
  /// Inertia after every assignment step of the winning restart, followed by
  /// the inertia against the final centroids.
  std::vector<double> inertia_history;
};

/// Lloyd's algorithm with k-means++ seeding.
KMeansResult kmeans(const Eigen::MatrixXd& x, const KMeansConfig& config);

struct KMedoidsConfig {
  std::size_t k = 8;
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
};

struct KMedoidsResult {
  ClusterAssignment assignment;
  std::vector<std::size_t> medoids;  // medoids[c] is the row index of label c's medoid
  double total_distance = 0.0;
  std::size_t iterations = 0;
};

/// Alternating (Voronoi-iteration) k-medoids with Euclidean distances.
KMedoidsResult kmedoids(const Eigen::MatrixXd& x, const KMedoidsConfig& config);

struct HdbscanConfig {
  std::size_t min_cluster_size = 5;
  std::optional<std::size_t> min_samples;  // defaults to min_cluster_size
  /// Lets the root of the condensed tree win the excess-of-mass selection.
  bool allow_single_cluster = true;
};

struct CondensedEdge {
  std::size_t parent;  // cluster id; the root is n_points
  std::size_t child;   // point index when < n_points, else cluster id
  double lambda;       // 1 / distance at which child leaves parent
  std::size_t size;
};

struct HdbscanResult {
  ClusterAssignment assignment;
  std::vector<CondensedEdge> condensed_tree;
  std::vector<std::size_t> selected_clusters;  // condensed-tree ids, in label order
};

HdbscanResult hdbscan(const Eigen::MatrixXd& x, const HdbscanConfig& config);

namespace detail {

/// Distance to the min_samples-th nearest neighbour, counting the point itself.
std::vector<double> core_distances(const Eigen::MatrixXd& x, std::size_t min_samples);

struct MstEdge {
  std::size_t a, b;
  double weight;
};

/// Prim's algorithm over mutual-reachability distances; n-1 edges in
/// ascending weight order.
std::vector<MstEdge> mutual_reachability_mst(const Eigen::MatrixXd& x,
                                             std::span<const double> core);

/// 53-bit uniform draw in [0, 1), identical on every standard library
/// (std::uniform_real_distribution is not).
double uniform01(std::mt19937_64& rng);

/// Greedy k-means++ seeding (2 + ln k candidates per step); returns row
/// indices of the chosen seeds.
std::vector<std::size_t> kmeanspp_seeds(const Eigen::MatrixXd& x, std::size_t k,
                                        std::mt19937_64& rng);

}  // namespace detail

}  // namespace clustopic
