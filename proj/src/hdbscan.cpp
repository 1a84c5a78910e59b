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

namespace detail {

std::vector<double> core_distances(const Eigen::MatrixXd& x, std::size_t min_samples) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (min_samples == 0 || min_samples > n) {
    fail(ErrorKind::validation, "min_samples must be in 1.." + std::to_string(n));
  }
  std::vector<double> core(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).norm();
    }
    auto kth = row.begin() + static_cast<std::ptrdiff_t>(min_samples - 1);
    std::nth_element(row.begin(), kth, row.end());
    core[i] = *kth;
  }
  return core;
}

std::vector<MstEdge> mutual_reachability_mst(const Eigen::MatrixXd& x,
                                             std::span<const double> core) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<MstEdge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);

  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t added = 1; added < n; ++added) {
    std::size_t next = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double d =
          (x.row(static_cast<Eigen::Index>(current)) - x.row(static_cast<Eigen::Index>(j))).norm();
      const double mr = std::max({d, core[current], core[j]});
      if (mr < best[j]) {
        best[j] = mr;
        from[j] = current;
      }
      if (next == n || best[j] < best[next]) next = j;
    }
    in_tree[next] = true;
    edges.push_back({from[next], next, best[next]});
    current = next;
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const MstEdge& a, const MstEdge& b) { return a.weight < b.weight; });
  return edges;
}

}  // namespace detail

namespace {

struct Merge {
  std::size_t left, right;
  double distance;
  std::size_t size;
};

// Node ids: points are 0..n-1, merge i creates node n+i.
std::vector<Merge> single_linkage(std::span<const detail::MstEdge> mst, std::size_t n) {
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::size_t> size(2 * n - 1, 1);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (const auto& e : mst) {
    const std::size_t a = find(e.a), b = find(e.b);
    const std::size_t node = n + merges.size();
    merges.push_back({a, b, e.weight, size[a] + size[b]});
    parent[a] = parent[b] = node;
    size[node] = size[a] + size[b];
  }
  return merges;
}

double lambda_of(double distance) {
  return 1.0 / std::max(distance, 1e-300);
}

std::vector<CondensedEdge> condense(const std::vector<Merge>& merges, std::size_t n,
                                    std::size_t min_cluster_size) {
  auto node_size = [&](std::size_t node) { return node < n ? std::size_t{1} : merges[node - n].size; };
  auto points_under = [&](std::size_t node, std::vector<std::size_t>& out) {
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      if (v < n) {
        out.push_back(v);
      } else {
        stack.push_back(merges[v - n].right);
        stack.push_back(merges[v - n].left);
      }
    }
  };

  std::vector<CondensedEdge> tree;
  const std::size_t root = 2 * n - 2;
  std::size_t next_label = n + 1;
  // (hierarchy node, condensed cluster it currently belongs to)
  std::vector<std::pair<std::size_t, std::size_t>> queue{{root, n}};
  std::vector<std::size_t> points;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [node, cluster] = queue[head];
    if (node < n) continue;
    const auto& m = merges[node - n];
    const double lambda = lambda_of(m.distance);
    const std::size_t ls = node_size(m.left), rs = node_size(m.right);
    const bool left_big = ls >= min_cluster_size, right_big = rs >= min_cluster_size;

    if (left_big && right_big) {
      for (auto [child, sz] : {std::pair{m.left, ls}, std::pair{m.right, rs}}) {
        const std::size_t label = next_label++;
        tree.push_back({cluster, label, lambda, sz});
        queue.emplace_back(child, label);
      }
      continue;
    }
    for (auto [child, big] : {std::pair{m.left, left_big}, std::pair{m.right, right_big}}) {
      if (big) {
        queue.emplace_back(child, cluster);  // the cluster carries on under this child
        continue;
      }
      points.clear();
      points_under(child, points);
      for (auto p : points) tree.push_back({cluster, p, lambda, 1});
    }
  }
  return tree;
}

}  // namespace

HdbscanResult hdbscan(const Eigen::MatrixXd& x, const HdbscanConfig& config) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (config.min_cluster_size < 2) {
    fail(ErrorKind::validation, "min_cluster_size must be at least 2");
  }
  if (n < config.min_cluster_size) {
    fail(ErrorKind::validation, std::to_string(n) + " rows are fewer than min_cluster_size = " +
                                    std::to_string(config.min_cluster_size));
  }
  const std::size_t min_samples = config.min_samples.value_or(config.min_cluster_size);

  const auto core = detail::core_distances(x, min_samples);
  const auto mst = detail::mutual_reachability_mst(x, core);
  const auto merges = single_linkage(mst, n);

  HdbscanResult result;
  result.condensed_tree = condense(merges, n, config.min_cluster_size);
  const auto& tree = result.condensed_tree;

  // Cluster ids are n..n+n_clusters-1; index them from 0.
  std::size_t n_clusters = 1;
  for (const auto& e : tree) {
    if (e.child >= n) n_clusters = std::max(n_clusters, e.child - n + 1);
  }
  std::vector<double> birth(n_clusters, 0.0);
  std::vector<std::size_t> parent_of(n_clusters, 0);
  std::vector<std::vector<std::size_t>> children(n_clusters);
  std::vector<std::size_t> point_parent(n, n);
  for (const auto& e : tree) {
    if (e.child >= n) {
      birth[e.child - n] = e.lambda;
      parent_of[e.child - n] = e.parent - n;
      children[e.parent - n].push_back(e.child - n);
    } else {
      point_parent[e.child] = e.parent - n;
    }
  }
  std::vector<double> stability(n_clusters, 0.0);
  for (const auto& e : tree) {
    const auto c = e.parent - n;
    stability[c] += (e.lambda - birth[c]) * static_cast<double>(e.size);
  }

  // Excess of mass, leaves first (children always carry larger ids).
  std::vector<bool> selected(n_clusters, false);
  for (std::size_t c = n_clusters; c-- > 0;) {
    if (c == 0 && !config.allow_single_cluster) break;
    if (children[c].empty()) {
      selected[c] = true;
      continue;
    }
    double subtree = 0.0;
    for (auto ch : children[c]) subtree += stability[ch];
    if (subtree > stability[c]) {
      stability[c] = subtree;
    } else {
      selected[c] = true;
      std::vector<std::size_t> stack(children[c].begin(), children[c].end());
      while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        selected[v] = false;
        stack.insert(stack.end(), children[v].begin(), children[v].end());
      }
    }
  }
  if (!config.allow_single_cluster) selected[0] = false;

  // A point takes the label of the nearest selected ancestor in the condensed tree.
  std::vector<int> raw(n, kNoise);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t c = point_parent[p];
    while (true) {
      if (selected[c]) {
        raw[p] = static_cast<int>(c);
        break;
      }
      if (c == 0) break;
      c = parent_of[c];
    }
  }
  result.assignment = ClusterAssignment::canonical(raw, true);

  std::vector<std::size_t> order(static_cast<std::size_t>(result.assignment.k()));
  for (std::size_t p = 0; p < n; ++p) {
    if (raw[p] >= 0) order[static_cast<std::size_t>(result.assignment[p])] =
        static_cast<std::size_t>(raw[p]) + n;
  }
  result.selected_clusters = std::move(order);
  return result;
}

}  // namespace clustopic
