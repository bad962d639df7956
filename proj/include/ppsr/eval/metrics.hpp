/*
 * Copyright 2026 The PPSR Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Clustering and ranking metrics.
//
//   accuracy   best one-to-one label matching (Hungarian on the contingency
//              table), as a fraction of points
//   pairwise F1  over unordered point pairs: TP = together in both labelings,
//              FP = together in pred only, FN = together in truth only;
//              0 when precision or recall is undefined
//   NMI        I(pred; truth) / sqrt(H(pred) H(truth)), natural logs; 0 when
//              either entropy is 0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ppsr/error.hpp"

namespace ppsr::eval {

using Labels = std::vector<int>;

namespace detail {

inline void check_pair(const Labels& pred, const Labels& truth) {
  if (pred.size() != truth.size()) {
    throw DataError("label vectors differ in length (" + std::to_string(pred.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw DataError("empty labelings");
  for (int v : pred) {
    if (v < 0) throw DataError("negative cluster label");
  }
  for (int v : truth) {
    if (v < 0) throw DataError("negative cluster label");
  }
}

// counts[p][t]
inline std::vector<std::vector<double>> contingency(const Labels& pred, const Labels& truth) {
  const int kp = *std::max_element(pred.begin(), pred.end()) + 1;
  const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  std::vector<std::vector<double>> c(kp, std::vector<double>(kt, 0.0));
  for (std::size_t i = 0; i < pred.size(); ++i) c[pred[i]][truth[i]] += 1;
  return c;
}

// Minimum-cost perfect assignment on an n x n matrix (shortest augmenting
// path, O(n^3)). Returns match[row] = column.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) minv[j] = cur, way[j] = j0;
        if (minv[j] < delta) delta = minv[j], j1 = j;
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j]) match[p[j] - 1] = j - 1;
  }
  return match;
}

inline double entropy(const std::vector<double>& counts, double n) {
  double h = 0;
  for (double c : counts) {
    if (c > 0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

}  // namespace detail

inline double clustering_accuracy(const Labels& pred, const Labels& truth) {
  detail::check_pair(pred, truth);
  auto c = detail::contingency(pred, truth);
  const std::size_t n = std::max(c.size(), c[0].size());
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t t = 0; t < c[p].size(); ++t) cost[p][t] = -c[p][t];
  }
  auto match = detail::hungarian(cost);
  double hit = 0;
  for (std::size_t p = 0; p < n; ++p) hit -= cost[p][match[p]];
  return hit / static_cast<double>(pred.size());
}

inline double pairwise_f1(const Labels& pred, const Labels& truth) {
  detail::check_pair(pred, truth);
  auto c = detail::contingency(pred, truth);
  auto pairs = [](double x) { return x * (x - 1) / 2; };
  double tp = 0, pred_pairs = 0, truth_pairs = 0;
  std::vector<double> col(c[0].size(), 0.0);
  for (const auto& row : c) {
    double r = 0;
    for (std::size_t t = 0; t < row.size(); ++t) {
      tp += pairs(row[t]);
      r += row[t];
      col[t] += row[t];
    }
    pred_pairs += pairs(r);
  }
  for (double x : col) truth_pairs += pairs(x);
  if (tp == 0 || pred_pairs == 0 || truth_pairs == 0) return 0.0;
  double precision = tp / pred_pairs, recall = tp / truth_pairs;
  return 2 * precision * recall / (precision + recall);
}

inline double nmi(const Labels& pred, const Labels& truth) {
  detail::check_pair(pred, truth);
  auto c = detail::contingency(pred, truth);
  const double n = static_cast<double>(pred.size());
  std::vector<double> a(c.size(), 0.0), b(c[0].size(), 0.0);
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t t = 0; t < c[p].size(); ++t) a[p] += c[p][t], b[t] += c[p][t];
  }
  const double ha = detail::entropy(a, n), hb = detail::entropy(b, n);
  if (ha <= 0 || hb <= 0) return 0.0;
  double mi = 0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t t = 0; t < c[p].size(); ++t) {
      if (c[p][t] > 0) mi += (c[p][t] / n) * std::log(n * c[p][t] / (a[p] * b[t]));
    }
  }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

struct Summary {
  double mean = 0;
  double stddev = 0;  // sample standard deviation; 0 for a single value
  double median = 0;
  std::size_t n = 0;
};

inline Summary summarize(std::vector<double> v) {
  Summary s;
  s.n = v.size();
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / (v.size() - 1));
  }
  std::sort(v.begin(), v.end());
  s.median = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  return s;
}

struct ClusterScores {
  double accuracy = 0, f1 = 0, nmi = 0;
};

inline ClusterScores score_clustering(const Labels& pred, const Labels& truth) {
  return {clustering_accuracy(pred, truth), pairwise_f1(pred, truth), nmi(pred, truth)};
}

struct MetricReport {
  std::string algorithm;
  std::string dataset;
  Summary accuracy, f1, nmi;
};

inline MetricReport make_report(std::string algorithm, std::string dataset,
                                const std::vector<ClusterScores>& runs) {
  std::vector<double> a, f, n;
  for (const auto& r : runs) a.push_back(r.accuracy), f.push_back(r.f1), n.push_back(r.nmi);
  return {std::move(algorithm), std::move(dataset), summarize(a), summarize(f), summarize(n)};
}

// ---- ranking ---------------------------------------------------------------

struct CurvePoint {
  int k = 0;
  double precision = 0;
  double recall = 0;
};

// Macro average over users with a non-empty relevant set. Lists shorter than
// k are evaluated as they are (precision still divides by k).
template <typename Item>
std::vector<CurvePoint> precision_recall_at_k(const std::vector<std::vector<Item>>& lists,
                                              const std::vector<std::set<Item>>& relevant,
                                              int k_min = 3, int k_max = 10) {
  if (lists.size() != relevant.size()) throw DataError("lists and relevant sets differ in size");
  if (k_min < 1 || k_max < k_min) throw ConfigError("need 1 <= k_min <= k_max");
  std::vector<std::size_t> users;
  for (std::size_t u = 0; u < lists.size(); ++u) {
    if (!relevant[u].empty()) users.push_back(u);
  }
  if (users.empty()) throw DataError("empty test set: no user has relevant items");
  std::vector<CurvePoint> out;
  for (int k = k_min; k <= k_max; ++k) {
    CurvePoint pt{k, 0, 0};
    for (std::size_t u : users) {
      const auto& l = lists[u];
      const std::size_t top = std::min<std::size_t>(k, l.size());
      double hits = 0;
      for (std::size_t i = 0; i < top; ++i) hits += relevant[u].contains(l[i]);
      pt.precision += hits / k;
      pt.recall += hits / relevant[u].size();
    }
    pt.precision /= users.size();
    pt.recall /= users.size();
    out.push_back(pt);
  }
  return out;
}

}  // namespace ppsr::eval
