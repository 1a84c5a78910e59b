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

// Independent reference implementations used only by tests. Each one takes
// raw label vectors and recomputes its metric from first principles, sharing
// no code with the library's contingency-table path.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace clustopic::oracle {

/// Fraction of all unordered pairs on which both labelings agree.
inline double rand_by_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool same_a = a[i] == a[j];
      const bool same_b = b[i] == b[j];
      agree += same_a == same_b ? 1 : 0;
      ++total;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(total);
}

inline long double binom(std::size_t n, std::size_t k) {
  if (k > n) return 0.0L;
  long double r = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return r;
}

struct Counts {
  std::map<int, std::size_t> a, b;
  std::map<std::pair<int, int>, std::size_t> ab;
};

inline Counts count_labels(const std::vector<int>& a, const std::vector<int>& b) {
  Counts c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++c.a[a[i]];
    ++c.b[b[i]];
    ++c.ab[{a[i], b[i]}];
  }
  return c;
}

/// ARI whose expected index is a sum over every cell of the hypergeometric
/// expectation of C(n_ij, 2), evaluated term by term.
inline double ari_by_hypergeometric_sums(const std::vector<int>& a, const std::vector<int>& b) {
  const auto c = count_labels(a, b);
  const std::size_t n = a.size();
  long double index = 0.0L;
  for (const auto& [key, v] : c.ab) index += binom(v, 2);
  long double sum_a = 0.0L, sum_b = 0.0L;
  for (const auto& [k, v] : c.a) sum_a += binom(v, 2);
  for (const auto& [k, v] : c.b) sum_b += binom(v, 2);

  long double expected = 0.0L;
  for (const auto& [ka, ai] : c.a) {
    for (const auto& [kb, bj] : c.b) {
      // n_ij ~ Hypergeometric(population n, successes ai, draws bj).
      for (std::size_t x = 0; x <= std::min(ai, bj); ++x) {
        const long double p = binom(ai, x) * binom(n - ai, bj - x) / binom(n, bj);
        expected += binom(x, 2) * p;
      }
    }
  }
  const long double max_index = 0.5L * (sum_a + sum_b);
  // Zero only when both sides are all singletons or both a single block.
  if (max_index - expected == 0.0L) return 1.0;
  return static_cast<double>((index - expected) / (max_index - expected));
}

inline double entropy(const std::map<int, std::size_t>& counts, std::size_t n) {
  double h = 0.0;
  for (const auto& [k, v] : counts) {
    const double p = static_cast<double>(v) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

inline double mutual_information(const std::vector<int>& a, const std::vector<int>& b) {
  const auto c = count_labels(a, b);
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (const auto& [key, v] : c.ab) {
    const double pij = static_cast<double>(v) / n;
    const double pi = static_cast<double>(c.a.at(key.first)) / n;
    const double pj = static_cast<double>(c.b.at(key.second)) / n;
    mi += pij * std::log(pij / (pi * pj));
  }
  return mi;
}

/// NMI with the geometric-mean normalization, from probabilities directly.
inline double nmi_direct(const std::vector<int>& a, const std::vector<int>& b) {
  const auto c = count_labels(a, b);
  const double ha = entropy(c.a, a.size()), hb = entropy(c.b, b.size());
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  return mutual_information(a, b) / std::sqrt(ha * hb);
}

/// Mean MI over random permutations of b. Labels are remapped to dense
/// indices once so each shuffle costs O(n + ka * kb).
inline double expected_mi_monte_carlo(const std::vector<int>& a, const std::vector<int>& b,
                                      std::size_t shuffles, std::uint64_t seed) {
  auto dense = [](const std::vector<int>& v, std::size_t& k) {
    std::map<int, std::size_t> ids;
    std::vector<std::size_t> out;
    for (int x : v) out.push_back(ids.try_emplace(x, ids.size()).first->second);
    k = ids.size();
    return out;
  };
  std::size_t ka = 0, kb = 0;
  const auto da = dense(a, ka);
  auto db = dense(b, kb);
  const std::size_t n = a.size();
  const double nd = static_cast<double>(n);
  std::vector<double> pa(ka, 0.0), pb(kb, 0.0);
  for (auto x : da) pa[x] += 1.0 / nd;
  for (auto x : db) pb[x] += 1.0 / nd;

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> joint(ka * kb);
  double sum = 0.0;
  for (std::size_t s = 0; s < shuffles; ++s) {
    std::shuffle(db.begin(), db.end(), rng);
    std::fill(joint.begin(), joint.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++joint[da[i] * kb + db[i]];
    double mi = 0.0;
    for (std::size_t i = 0; i < ka; ++i) {
      for (std::size_t j = 0; j < kb; ++j) {
        const auto c = joint[i * kb + j];
        if (c == 0) continue;
        const double pij = static_cast<double>(c) / nd;
        mi += pij * std::log(pij / (pa[i] * pb[j]));
      }
    }
    sum += mi;
  }
  return sum / static_cast<double>(shuffles);
}

}  // namespace clustopic::oracle
