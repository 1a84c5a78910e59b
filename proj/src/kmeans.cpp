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
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "clustopic/clustering.hpp"
#include "clustopic/error.hpp"

namespace clustopic {

const char* to_string(Algorithm algo) noexcept {
  switch (algo) {
    case Algorithm::kmeans: return "kmeans";
    case Algorithm::kmedoids: return "kmedoids";
    case Algorithm::hdbscan: return "hdbscan";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "kmeans" || name == "k-means") return Algorithm::kmeans;
  if (name == "kmedoids" || name == "k-medoids") return Algorithm::kmedoids;
  if (name == "hdbscan") return Algorithm::hdbscan;
  fail(ErrorKind::validation, "unknown clustering algorithm '" + std::string(name) + "'");
}

namespace detail {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> kmeanspp_seeds(const Eigen::MatrixXd& x, std::size_t k,
                                        std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  auto sq_dist = [&](std::size_t i, std::size_t j) {
    return (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).squaredNorm();
  };

  std::vector<std::size_t> seeds;
  seeds.reserve(k);
  std::vector<bool> chosen(n, false);
  auto pick = [&](std::size_t i) {
    seeds.push_back(i);
    chosen[i] = true;
  };
  pick(std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n))));

  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i) closest[i] = sq_dist(i, seeds[0]);

  // Greedy variant: draw several D^2-weighted candidates per step and keep
  // the one that lowers the potential most.
  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  std::vector<double> cumulative(n), candidate_d2(n), best_d2(n);
  while (seeds.size() < k) {
    std::partial_sum(closest.begin(), closest.end(), cumulative.begin());
    const double potential = cumulative.back();
    if (!(potential > 0.0)) {
      // Every remaining point coincides with a seed.
      pick(static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin()));
      continue;
    }
    std::size_t best = n;
    double best_potential = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      const double target = uniform01(rng) * potential;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
      auto candidate = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
          it - cumulative.begin(), static_cast<std::ptrdiff_t>(n - 1)));
      while (closest[candidate] == 0.0 && candidate > 0) --candidate;  // rounding at the top end
      double pot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate_d2[i] = std::min(closest[i], sq_dist(i, candidate));
        pot += candidate_d2[i];
      }
      if (pot < best_potential) {
        best_potential = pot;
        best = candidate;
        best_d2.swap(candidate_d2);
      }
    }
    pick(best);
    closest.swap(best_d2);
  }
  return seeds;
}

}  // namespace detail

namespace {

struct Assignment {
  std::vector<int> labels;
  std::vector<double> dist2;
  double inertia = 0.0;
};

Assignment assign_nearest(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids) {
  const auto n = x.rows();
  const auto k = centroids.rows();
  Assignment a;
  a.labels.resize(static_cast<std::size_t>(n));
  a.dist2.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Eigen::Index c = 0; c < k; ++c) {
      const double d = (x.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    a.labels[static_cast<std::size_t>(i)] = best_c;
    a.dist2[static_cast<std::size_t>(i)] = best;
  }
  return a;
}

// Moves the point farthest from its centroid into each empty cluster, taking
// only from clusters that keep at least one member.
void repair_empty(const Eigen::MatrixXd& x, Eigen::MatrixXd& centroids, Assignment& a) {
  const auto k = static_cast<std::size_t>(centroids.rows());
  std::vector<std::size_t> sizes(k, 0);
  for (int l : a.labels) ++sizes[static_cast<std::size_t>(l)];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t far = a.labels.size();
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (sizes[static_cast<std::size_t>(a.labels[i])] < 2) continue;
      if (far == a.labels.size() || a.dist2[i] > a.dist2[far]) far = i;
    }
    if (far == a.labels.size()) fail(ErrorKind::diagnostic, "cannot repair an empty cluster");
    --sizes[static_cast<std::size_t>(a.labels[far])];
    ++sizes[c];
    a.labels[far] = static_cast<int>(c);
    a.dist2[far] = 0.0;
    centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(far));
  }
  a.inertia = 0.0;
  for (double d : a.dist2) a.inertia += d;
}

Eigen::MatrixXd means_of(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                         Eigen::Index k) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
  std::vector<double> sizes(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sums.row(labels[i]) += x.row(static_cast<Eigen::Index>(i));
    sizes[static_cast<std::size_t>(labels[i])] += 1.0;
  }
  for (Eigen::Index c = 0; c < k; ++c) sums.row(c) /= sizes[static_cast<std::size_t>(c)];
  return sums;
}

KMeansResult lloyd(const Eigen::MatrixXd& x, const KMeansConfig& config, std::mt19937_64& rng) {
  const auto k = static_cast<Eigen::Index>(config.k);
  Eigen::MatrixXd centroids(k, x.cols());
  const auto seeds = detail::kmeanspp_seeds(x, config.k, rng);
  for (Eigen::Index c = 0; c < k; ++c) {
    centroids.row(c) = x.row(static_cast<Eigen::Index>(seeds[static_cast<std::size_t>(c)]));
  }

  KMeansResult result;
  Assignment a;
  for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
    a = assign_nearest(x, centroids);
    repair_empty(x, centroids, a);
    result.inertia_history.push_back(a.inertia);
    ++result.iterations;

    Eigen::MatrixXd updated = means_of(x, a.labels, k);
    double shift = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      shift = std::max(shift, (updated.row(c) - centroids.row(c)).norm());
    }
    centroids = std::move(updated);
    if (shift <= config.tol) break;
  }

  // Final labels agree with the final centroids.
  a = assign_nearest(x, centroids);
  repair_empty(x, centroids, a);
  result.inertia_history.push_back(a.inertia);
  result.inertia = a.inertia;

  // Renumber by first member so output does not depend on seed order.
  std::vector<int> remap(static_cast<std::size_t>(k), -1);
  int next = 0;
  for (int& l : a.labels) {
    auto& r = remap[static_cast<std::size_t>(l)];
    if (r < 0) r = next++;
    l = r;
  }
  result.centroids.resize(k, x.cols());
  for (Eigen::Index c = 0; c < k; ++c) {
    result.centroids.row(remap[static_cast<std::size_t>(c)]) = centroids.row(c);
  }
  result.assignment = ClusterAssignment(std::move(a.labels), false);
  return result;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& x, const KMeansConfig& config) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (config.k == 0) fail(ErrorKind::validation, "k must be at least 1");
  if (config.k > n) {
    fail(ErrorKind::validation,
         "k = " + std::to_string(config.k) + " exceeds the " + std::to_string(n) + " rows");
  }
  if (config.max_iter == 0) fail(ErrorKind::validation, "max_iter must be at least 1");
  if (config.n_init == 0) fail(ErrorKind::validation, "n_init must be at least 1");
  if (!(config.tol >= 0.0)) fail(ErrorKind::validation, "tol must be non-negative");

  std::mt19937_64 rng(config.seed);
  KMeansResult best;
  for (std::size_t run = 0; run < config.n_init; ++run) {
    auto result = lloyd(x, config, rng);
    if (run == 0 || result.inertia < best.inertia) best = std::move(result);
  }
  return best;
}

KMedoidsResult kmedoids(const Eigen::MatrixXd& x, const KMedoidsConfig& config) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (config.k == 0) fail(ErrorKind::validation, "k must be at least 1");
  if (config.k > n) {
    fail(ErrorKind::validation,
         "k = " + std::to_string(config.k) + " exceeds the " + std::to_string(n) + " rows");
  }
  if (config.max_iter == 0) fail(ErrorKind::validation, "max_iter must be at least 1");

  auto dist = [&](std::size_t a, std::size_t b) {
    return (x.row(static_cast<Eigen::Index>(a)) - x.row(static_cast<Eigen::Index>(b))).norm();
  };

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> medoids = detail::kmeanspp_seeds(x, config.k, rng);
  std::vector<int> labels(n, 0);

  auto assign = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < medoids.size(); ++c) {
        const double d = dist(i, medoids[c]);
        if (d < best) {
          best = d;
          labels[i] = static_cast<int>(c);
        }
      }
      total += best;
    }
    // A medoid always belongs to its own cluster, even when it coincides
    // with another medoid.
    for (std::size_t c = 0; c < medoids.size(); ++c) labels[medoids[c]] = static_cast<int>(c);
    return total;
  };

  KMedoidsResult result;
  for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
    assign();
    ++result.iterations;
    std::vector<std::vector<std::size_t>> members(medoids.size());
    for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

    std::vector<std::size_t> updated(medoids.size());
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t candidate : members[c]) {  // ascending, so ties keep the lowest index
        double cost = 0.0;
        for (std::size_t other : members[c]) cost += dist(candidate, other);
        if (cost < best) {
          best = cost;
          updated[c] = candidate;
        }
      }
    }
    const bool stable = updated == medoids;
    medoids = std::move(updated);
    if (stable) break;
  }
  result.total_distance = assign();

  std::vector<int> remap(medoids.size(), -1);
  int next = 0;
  for (int& l : labels) {
    auto& r = remap[static_cast<std::size_t>(l)];
    if (r < 0) r = next++;
    l = r;
  }
  result.medoids.resize(medoids.size());
  for (std::size_t c = 0; c < medoids.size(); ++c) {
    result.medoids[static_cast<std::size_t>(remap[c])] = medoids[c];
  }
  result.assignment = ClusterAssignment(std::move(labels), false);
  return result;
}

}  // namespace clustopic
