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

// Single-view and co-regularized multi-view NMF with multiplicative updates.
//
// For views V(s) (m x n_s) the multi-view objective is
//
//   J = sum_s lambda_s ||V(s) - W(s) H(s)||_F^2
//       + sum_{s<t} lambda_st ||W(s) - W(t)||_F^2
//
// and each sweep applies, view by view,
//
//   H(s) <- H(s) * (W(s)^T V(s)) / (W(s)^T W(s) H(s) + eps)
//
// followed by
//
//   W(s) <- W(s) * (lambda_s V(s) H(s)^T + sum_{t!=s} lambda_st W(t))
//                / (lambda_s W(s) H(s) H(s)^T + sum_{t!=s} lambda_st W(s) + eps)
//
// Views are updated in order and each W update reads the newest W(t) of the
// other views, so every block step is a majorize-minimize step and J never
// increases (up to the eps guard).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ppsr/error.hpp"

namespace ppsr::nmf {

using Matrix = Eigen::MatrixXd;

struct ViewMatrix {
  Matrix data;
  int view_id = 0;
};

struct MultiViewConfig {
  int K = 2;
  std::vector<double> lambda_view;
  // n_v x n_v, symmetric, zero diagonal. Each unordered pair counts once.
  Matrix lambda_pair;
  int max_iters = 300;
  double rel_tol = 1e-5;
  std::uint64_t seed = 0;
  double epsilon = 1e-12;

  // lambda_s = 1, lambda_st = 0.1 for s != t.
  static MultiViewConfig defaults(std::size_t n_views, int K) {
    MultiViewConfig c;
    c.K = K;
    c.lambda_view.assign(n_views, 1.0);
    c.lambda_pair = Matrix::Constant(static_cast<Eigen::Index>(n_views),
                                     static_cast<Eigen::Index>(n_views), 0.1);
    c.lambda_pair.diagonal().setZero();
    return c;
  }

  void validate(std::size_t n_views) const {
    if (K <= 0) throw ConfigError("K must be positive");
    if (max_iters <= 0) throw ConfigError("max_iters must be positive");
    if (!(rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (lambda_view.size() != n_views) {
      throw ConfigError("lambda_view has " + std::to_string(lambda_view.size()) +
                        " entries for " + std::to_string(n_views) + " views");
    }
    for (double l : lambda_view) {
      if (!(l >= 0.0) || !std::isfinite(l)) {
        throw ConfigError("lambda_view entries must be finite and >= 0");
      }
    }
    const auto nv = static_cast<Eigen::Index>(n_views);
    if (lambda_pair.rows() != nv || lambda_pair.cols() != nv) {
      throw ConfigError("lambda_pair must be n_v x n_v");
    }
    for (Eigen::Index s = 0; s < nv; ++s) {
      if (lambda_pair(s, s) != 0.0) {
        throw ConfigError("lambda_pair diagonal must be zero");
      }
      for (Eigen::Index t = 0; t < nv; ++t) {
        double v = lambda_pair(s, t);
        if (!(v >= 0.0) || !std::isfinite(v)) {
          throw ConfigError("lambda_pair entries must be finite and >= 0");
        }
        if (v != lambda_pair(t, s)) {
          throw ConfigError("lambda_pair must be symmetric");
        }
      }
    }
  }
};

struct FactorModel {
  int K = 0;
  std::vector<Matrix> W;  // per view, m x K
  std::vector<Matrix> H;  // per view, K x n_s
  // objective_trace[0] is J at the initial factors; entry t is J after sweep t.
  std::vector<double> objective_trace;
  std::vector<int> assignment;
  int iterations = 0;
  bool converged = false;

  Eigen::Index items() const { return W.empty() ? 0 : W.front().rows(); }
  std::size_t views() const { return W.size(); }
};

struct SweepState {
  int iteration;
  std::span<const Matrix> W;
  std::span<const Matrix> H;
  double objective;
};

using SweepObserver = std::function<void(const SweepState&)>;

inline void check_view(const Matrix& v, const char* what) {
  if (v.rows() < 1 || v.cols() < 1) {
    throw DataError(std::string(what) + ": view matrix is empty");
  }
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      double x = v(i, j);
      if (!std::isfinite(x)) {
        throw DataError(std::string(what) + ": non-finite entry at (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (x < 0.0) {
        throw DataError(std::string(what) + ": negative entry at (" +
                        std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

// Scales a view to unit Frobenius norm. A zero view is returned unchanged.
inline Matrix normalize_view(const Matrix& v) {
  double norm = v.norm();
  if (norm == 0.0) return v;
  return v / norm;
}

// J for the given factors; views are used as passed (no normalization).
inline double multiview_objective(std::span<const Matrix> views,
                                  std::span<const Matrix> W,
                                  std::span<const Matrix> H,
                                  std::span<const double> lambda_view,
                                  const Matrix& lambda_pair) {
  double j = 0.0;
  const std::size_t nv = views.size();
  for (std::size_t s = 0; s < nv; ++s) {
    j += lambda_view[s] * (views[s] - W[s] * H[s]).squaredNorm();
  }
  for (std::size_t s = 0; s < nv; ++s) {
    for (std::size_t t = s + 1; t < nv; ++t) {
      double l = lambda_pair(static_cast<Eigen::Index>(s),
                             static_cast<Eigen::Index>(t));
      if (l != 0.0) j += l * (W[s] - W[t]).squaredNorm();
    }
  }
  return j;
}

// Row-wise argmax with ties to the lowest column.
inline std::vector<int> argmax_rows(const Matrix& w) {
  std::vector<int> out(static_cast<std::size_t>(w.rows()), 0);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < w.cols(); ++k) {
      if (w(i, k) > w(i, best)) best = k;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

// Consensus W_bar = sum_s lambda_s W(s) / sum_s lambda_s, then row argmax.
inline std::vector<int> assign_clusters(const FactorModel& model,
                                        std::span<const double> lambda_view) {
  if (model.W.empty()) throw ConfigError("model has no view factors");
  if (lambda_view.size() != model.W.size()) {
    throw ConfigError("lambda_view size does not match the model's views");
  }
  double total = 0.0;
  for (double l : lambda_view) total += l;
  if (!(total > 0.0)) throw ConfigError("all lambda_view weights are zero");
  Matrix consensus = Matrix::Zero(model.W[0].rows(), model.W[0].cols());
  for (std::size_t s = 0; s < model.W.size(); ++s) {
    if (lambda_view[s] != 0.0) consensus += lambda_view[s] * model.W[s];
  }
  consensus /= total;
  return argmax_rows(consensus);
}

// Items sharing item's cluster, excluding item itself, ascending.
inline std::vector<std::size_t> nearest_neighbors(std::span<const int> assignment,
                                                  std::size_t item) {
  if (item >= assignment.size()) {
    throw DataError("item " + std::to_string(item) + " out of range (" +
                    std::to_string(assignment.size()) + " items)");
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (j != item && assignment[j] == assignment[item]) out.push_back(j);
  }
  return out;
}

namespace detail {

inline Matrix random_factor(std::mt19937_64& rng, Eigen::Index rows,
                            Eigen::Index cols, double scale) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double u;
      do {
        u = unif(rng);
      } while (u <= 0.0);
      m(i, j) = u * scale;
    }
  }
  return m;
}

// Entries uniform on (0,1) scaled by sqrt(mean(V)/K); W(s) then H(s) per view
// in view order, all from one stream.
inline void seeded_init(std::span<const Matrix> views, int K, std::uint64_t seed,
                        std::vector<Matrix>& W, std::vector<Matrix>& H) {
  std::mt19937_64 rng(seed);
  W.clear();
  H.clear();
  for (const Matrix& v : views) {
    double scale = std::sqrt(v.mean() / static_cast<double>(K));
    W.push_back(random_factor(rng, v.rows(), K, scale));
    H.push_back(random_factor(rng, K, v.cols(), scale));
  }
}

inline FactorModel run(std::span<const Matrix> views, const MultiViewConfig& config,
                       std::vector<Matrix> W, std::vector<Matrix> H,
                       const SweepObserver& observer) {
  const std::size_t nv = views.size();
  const double eps = config.epsilon;

  FactorModel model;
  model.K = config.K;
  double prev = multiview_objective(views, W, H, config.lambda_view,
                                    config.lambda_pair);
  model.objective_trace.push_back(prev);

  for (int it = 1; it <= config.max_iters; ++it) {
    for (std::size_t s = 0; s < nv; ++s) {
      Matrix num = W[s].transpose() * views[s];
      Matrix den = (W[s].transpose() * W[s]) * H[s];
      den.array() += eps;
      H[s] = H[s].cwiseProduct(num).cwiseQuotient(den);
    }
    for (std::size_t s = 0; s < nv; ++s) {
      const double ls = config.lambda_view[s];
      Matrix num = ls * (views[s] * H[s].transpose());
      Matrix den = ls * (W[s] * (H[s] * H[s].transpose()));
      for (std::size_t t = 0; t < nv; ++t) {
        if (t == s) continue;
        double lst = config.lambda_pair(static_cast<Eigen::Index>(s),
                                        static_cast<Eigen::Index>(t));
        if (lst == 0.0) continue;
        num += lst * W[t];
        den += lst * W[s];
      }
      den.array() += eps;
      W[s] = W[s].cwiseProduct(num).cwiseQuotient(den);
    }

    double cur = multiview_objective(views, W, H, config.lambda_view,
                                     config.lambda_pair);
    model.objective_trace.push_back(cur);
    model.iterations = it;
    if (observer) observer(SweepState{it, W, H, cur});

    if (prev == 0.0 || (prev - cur) < config.rel_tol * prev) {
      model.converged = true;
      break;
    }
    prev = cur;
  }

  model.W = std::move(W);
  model.H = std::move(H);
  return model;
}

inline void check_initial(std::span<const Matrix> views, int K,
                          const std::vector<Matrix>& W,
                          const std::vector<Matrix>& H) {
  if (W.size() != views.size() || H.size() != views.size()) {
    throw DataError("initial factors must be given for every view");
  }
  for (std::size_t s = 0; s < views.size(); ++s) {
    if (W[s].rows() != views[s].rows() || W[s].cols() != K ||
        H[s].rows() != K || H[s].cols() != views[s].cols()) {
      throw DataError("initial factor shape mismatch for view " +
                      std::to_string(s));
    }
    if ((W[s].array() < 0.0).any() || (H[s].array() < 0.0).any() ||
        !W[s].allFinite() || !H[s].allFinite()) {
      throw DataError("initial factors must be finite and non-negative");
    }
  }
}

inline std::vector<Matrix> prepare_views(std::span<const ViewMatrix> views) {
  if (views.empty()) throw DataError("at least one view is required");
  std::vector<Matrix> out;
  out.reserve(views.size());
  const Eigen::Index m = views.front().data.rows();
  for (const ViewMatrix& v : views) {
    check_view(v.data, "multiview_factorize");
    if (v.data.rows() != m) {
      throw DataError("views disagree on the number of items (" +
                      std::to_string(m) + " vs " +
                      std::to_string(v.data.rows()) + ")");
    }
    out.push_back(normalize_view(v.data));
  }
  return out;
}

inline void check_rank(int K, std::span<const Matrix> views) {
  if (K <= 0) throw ConfigError("K must be positive");
  for (const Matrix& v : views) {
    if (K > std::min(v.rows(), v.cols())) {
      throw ConfigError("K=" + std::to_string(K) + " exceeds min(m, n_s)");
    }
  }
}

}  // namespace detail

// Plain Lee-Seung factorization of one view, O = ||V - WH||_F^2. The view is
// not normalized. Only K, max_iters, rel_tol, seed and epsilon are read from
// config; the lambda fields are ignored.
inline FactorModel nmf_factorize(const ViewMatrix& view, int K,
                                 const MultiViewConfig& config,
                                 const SweepObserver& observer = {}) {
  check_view(view.data, "nmf_factorize");
  MultiViewConfig c = config;
  c.K = K;
  c.lambda_view = {1.0};
  c.lambda_pair = Matrix::Zero(1, 1);
  c.validate(1);
  const Matrix* vp = &view.data;
  std::span<const Matrix> views(vp, 1);
  detail::check_rank(K, views);
  std::vector<Matrix> W, H;
  detail::seeded_init(views, K, c.seed, W, H);
  FactorModel model = detail::run(views, c, std::move(W), std::move(H), observer);
  model.assignment = argmax_rows(model.W[0]);
  return model;
}

// Multi-view factorization from explicit starting factors. Views are
// normalized to unit Frobenius norm first.
inline FactorModel multiview_factorize(std::span<const ViewMatrix> views,
                                       const MultiViewConfig& config,
                                       std::vector<Matrix> W0,
                                       std::vector<Matrix> H0,
                                       const SweepObserver& observer = {}) {
  std::vector<Matrix> normalized = detail::prepare_views(views);
  config.validate(views.size());
  detail::check_rank(config.K, normalized);
  detail::check_initial(normalized, config.K, W0, H0);
  FactorModel model =
      detail::run(normalized, config, std::move(W0), std::move(H0), observer);
  model.assignment = assign_clusters(model, config.lambda_view);
  return model;
}

inline FactorModel multiview_factorize(std::span<const ViewMatrix> views,
                                       const MultiViewConfig& config,
                                       const SweepObserver& observer = {}) {
  std::vector<Matrix> normalized = detail::prepare_views(views);
  config.validate(views.size());
  detail::check_rank(config.K, normalized);
  std::vector<Matrix> W, H;
  detail::seeded_init(normalized, config.K, config.seed, W, H);
  FactorModel model =
      detail::run(normalized, config, std::move(W), std::move(H), observer);
  model.assignment = assign_clusters(model, config.lambda_view);
  return model;
}

}  // namespace ppsr::nmf
