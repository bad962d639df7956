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

// Baseline clusterers over the rows of a data matrix.
//
//   kmeans  Lloyd iterations from k-means++ seeding; a cluster that empties
//           is reseeded with the point farthest from its center
//   svd     rank-K thin SVD, rows embedded as U_K * Sigma_K, then kmeans
//   nmf     nmf_factorize, then row argmax of W

#pragma once

#include <Eigen/SVD>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ppsr/error.hpp"
#include "ppsr/nmf/multiview_nmf.hpp"
#include "ppsr/random.hpp"

namespace ppsr::eval {

using nmf::Matrix;

enum class BaselineMethod { kKMeans, kSvd, kNmf };

inline const char* to_string(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::kKMeans: return "kmeans";
    case BaselineMethod::kSvd: return "svd";
    case BaselineMethod::kNmf: return "nmf";
  }
  return "?";
}

inline BaselineMethod parse_baseline(const std::string& s) {
  if (s == "kmeans") return BaselineMethod::kKMeans;
  if (s == "svd") return BaselineMethod::kSvd;
  if (s == "nmf") return BaselineMethod::kNmf;
  throw ConfigError("unknown baseline '" + s + "' (kmeans, svd, nmf)");
}

struct KMeansOptions {
  int max_iters = 100;
  // Reseeds allowed per run before giving up on an empty cluster.
  int max_reseeds = 50;
};

struct KMeansResult {
  std::vector<int> assignment;
  Matrix centers;
  double inertia = 0;
  int iterations = 0;
  int reseeds = 0;
};

namespace detail {

inline double sq_dist(const Matrix& x, Eigen::Index i, const Matrix& c, Eigen::Index k) {
  return (x.row(i) - c.row(k)).squaredNorm();
}

inline Matrix kmeanspp_centers(const Matrix& x, int K, Sampler& rng) {
  const Eigen::Index m = x.rows();
  Matrix centers(K, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(m)));
  std::vector<double> d(m);
  for (Eigen::Index i = 0; i < m; ++i) d[i] = sq_dist(x, i, centers, 0);
  for (int k = 1; k < K; ++k) {
    double total = 0;
    for (double v : d) total += v;
    Eigen::Index pick = 0;
    if (total > 0) {
      double target = rng.unit() * total;
      for (pick = 0; pick + 1 < m && target >= d[pick]; ++pick) target -= d[pick];
    } else {
      pick = static_cast<Eigen::Index>(rng.below(m));
    }
    centers.row(k) = x.row(pick);
    for (Eigen::Index i = 0; i < m; ++i) d[i] = std::min(d[i], sq_dist(x, i, centers, k));
  }
  return centers;
}

}  // namespace detail

inline KMeansResult kmeans(const Matrix& x, int K, std::uint64_t seed,
                           const KMeansOptions& options = {}) {
  const Eigen::Index m = x.rows();
  if (K <= 0 || K > m) throw ConfigError("kmeans needs 1 <= K <= number of rows");
  Sampler rng(seed);
  KMeansResult r;
  r.centers = detail::kmeanspp_centers(x, K, rng);
  r.assignment.assign(m, -1);
  for (r.iterations = 1; r.iterations <= options.max_iters; ++r.iterations) {
    bool changed = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      int best = 0;
      double bd = detail::sq_dist(x, i, r.centers, 0);
      for (int k = 1; k < K; ++k) {
        double dk = detail::sq_dist(x, i, r.centers, k);
        if (dk < bd) bd = dk, best = k;
      }
      if (r.assignment[i] != best) r.assignment[i] = best, changed = true;
    }
    std::vector<int> size(K, 0);
    Matrix sum = Matrix::Zero(K, x.cols());
    for (Eigen::Index i = 0; i < m; ++i) {
      sum.row(r.assignment[i]) += x.row(i);
      ++size[r.assignment[i]];
    }
    bool reseeded = false;
    for (int k = 0; k < K; ++k) {
      if (size[k] > 0) {
        r.centers.row(k) = sum.row(k) / size[k];
        continue;
      }
      if (++r.reseeds > options.max_reseeds) {
        throw DataError("kmeans: empty cluster persists after " +
                        std::to_string(options.max_reseeds) + " reseeds");
      }
      Eigen::Index far = 0;
      double fd = -1;
      for (Eigen::Index i = 0; i < m; ++i) {
        double di = detail::sq_dist(x, i, r.centers, r.assignment[i]);
        if (size[r.assignment[i]] > 1 && di > fd) fd = di, far = i;
      }
      r.centers.row(k) = x.row(far);
      --size[r.assignment[far]];
      r.assignment[far] = k;
      size[k] = 1;
      reseeded = true;
    }
    if (!changed && !reseeded) break;
  }
  r.iterations = std::min(r.iterations, options.max_iters);
  r.inertia = 0;
  for (Eigen::Index i = 0; i < m; ++i) r.inertia += detail::sq_dist(x, i, r.centers, r.assignment[i]);
  return r;
}

inline Matrix svd_embedding(const Matrix& v, int K) {
  if (K <= 0 || K > std::min(v.rows(), v.cols())) {
    throw ConfigError("svd needs 1 <= K <= min(rows, cols)");
  }
  Eigen::BDCSVD<Matrix> svd(v, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(K) * svd.singularValues().head(K).asDiagonal();
}

// Views normalized to unit Frobenius norm and placed side by side.
inline Matrix concatenate_views(std::span<const nmf::ViewMatrix> views) {
  if (views.empty()) throw DataError("no views to concatenate");
  Eigen::Index cols = 0;
  for (const auto& v : views) cols += v.data.cols();
  Matrix out(views.front().data.rows(), cols);
  Eigen::Index at = 0;
  for (const auto& v : views) {
    if (v.data.rows() != out.rows()) throw DataError("views disagree on the number of items");
    out.middleCols(at, v.data.cols()) = nmf::normalize_view(v.data);
    at += v.data.cols();
  }
  return out;
}

inline std::vector<int> baseline_cluster(const Matrix& v, int K, BaselineMethod method,
                                         std::uint64_t seed,
                                         const nmf::MultiViewConfig& nmf_config = {}) {
  if (K <= 0 || K > v.rows()) throw ConfigError("baseline needs 1 <= K <= m");
  switch (method) {
    case BaselineMethod::kKMeans:
      return kmeans(v, K, seed).assignment;
    case BaselineMethod::kSvd:
      return kmeans(svd_embedding(v, K), K, seed).assignment;
    case BaselineMethod::kNmf: {
      nmf::MultiViewConfig c = nmf_config;
      c.seed = seed;
      return nmf::nmf_factorize(nmf::ViewMatrix{v, 0}, K, c).assignment;
    }
  }
  throw ConfigError("unknown baseline");
}

}  // namespace ppsr::eval
