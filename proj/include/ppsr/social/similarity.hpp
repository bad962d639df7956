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

// Three-channel user similarity:
//
//   sim_P = cos(P_i, P_j)                                 publications
//   sim_C = l_R cos(R_i, R_j) + l_F cos(F_i, F_j)         follows / friends
//   sim_I = l_Lk Lk_ij/Lk_ii + l_Cmt Cmt_ij/Cmt_ii + l_Rp Rp_ij/Rp_ii
//   Sim   = l_P sim_P + l_C sim_C + l_I sim_I
//
// A cosine with a zero-norm side, and a ratio with a zero denominator, is 0.
// sim_I divides by user i's own totals, so Sim is not symmetric in general.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ppsr/error.hpp"
#include "ppsr/social/text.hpp"

namespace ppsr::social {

using UserId = std::uint32_t;

struct UserProfile {
  UserId user_id = 0;
  SparseVector publication;
  std::vector<std::uint8_t> follows;  // R_i: 1 if i follows k
  std::vector<std::uint8_t> friends;  // F_i: R_ik && R_ki
  // Slot i holds the user's own total; slot j != i the co-count with user j.
  std::vector<std::int32_t> likes;
  std::vector<std::int32_t> comments;
  std::vector<std::int32_t> reposts;
};

class SimilarityWeights {
 public:
  // Uniform weights in every group.
  SimilarityWeights() : SimilarityWeights(1, 1, 1, 1, 1, 1, 1, 1) {}

  // Each group (P,C,I), (R,F), (Lk,Cmt,Rp) is rescaled to sum to 1.
  SimilarityWeights(double p, double c, double i, double r, double f, double lk,
                    double cmt, double rp) {
    double top[3] = {p, c, i};
    double conn[2] = {r, f};
    double inter[3] = {lk, cmt, rp};
    normalize(top, "lambda_P/C/I");
    normalize(conn, "lambda_R/F");
    normalize(inter, "lambda_Lk/Cmt/Rp");
    p_ = top[0], c_ = top[1], i_ = top[2];
    r_ = conn[0], f_ = conn[1];
    lk_ = inter[0], cmt_ = inter[1], rp_ = inter[2];
  }

  double p() const { return p_; }
  double c() const { return c_; }
  double i() const { return i_; }
  double r() const { return r_; }
  double f() const { return f_; }
  double lk() const { return lk_; }
  double cmt() const { return cmt_; }
  double rp() const { return rp_; }

 private:
  template <std::size_t N>
  static void normalize(double (&w)[N], const char* group) {
    double sum = 0.0;
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ConfigError(std::string(group) + ": weights must be finite and >= 0");
      }
      sum += x;
    }
    if (!(sum > 0.0)) throw ConfigError(std::string(group) + ": weights sum to zero");
    for (double& x : w) x /= sum;
  }

  double p_, c_, i_, r_, f_, lk_, cmt_, rp_;
};

inline double publication_similarity(const SparseVector& a, const SparseVector& b) {
  if (a.size() != b.size()) {
    throw DataError("publication vectors differ in length");
  }
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  double c = a.dot(b) / (na * nb);
  return std::clamp(c, 0.0, 1.0);
}

inline double binary_cosine(std::span<const std::uint8_t> a,
                            std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw DataError("binary vectors differ in length");
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    na += a[k] != 0;
    nb += b[k] != 0;
    both += (a[k] != 0) && (b[k] != 0);
  }
  if (na == 0 || nb == 0) return 0.0;
  return static_cast<double>(both) /
         std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
}

inline double connection_similarity(const UserProfile& a, const UserProfile& b,
                                    const SimilarityWeights& w) {
  return w.r() * binary_cosine(a.follows, b.follows) +
         w.f() * binary_cosine(a.friends, b.friends);
}

namespace detail {

inline double count_ratio(std::span<const std::int32_t> row, UserId i, UserId j,
                          const char* channel) {
  if (i >= row.size() || j >= row.size()) {
    throw DataError(std::string(channel) + " row shorter than user id");
  }
  std::int32_t co = row[j], total = row[i];
  if (co < 0 || total < 0) {
    throw DataError(std::string(channel) + " counts must be non-negative");
  }
  if (total == 0) return 0.0;
  if (co > total) {
    throw DataError(std::string(channel) + " co-count exceeds the user's total");
  }
  return static_cast<double>(co) / static_cast<double>(total);
}

}  // namespace detail

inline double interaction_similarity(const UserProfile& a, const UserProfile& b,
                                     const SimilarityWeights& w) {
  const UserId i = a.user_id, j = b.user_id;
  return w.lk() * detail::count_ratio(a.likes, i, j, "like") +
         w.cmt() * detail::count_ratio(a.comments, i, j, "comment") +
         w.rp() * detail::count_ratio(a.reposts, i, j, "repost");
}

inline double unified_similarity(const UserProfile& a, const UserProfile& b,
                                 const SimilarityWeights& w) {
  return w.p() * publication_similarity(a.publication, b.publication) +
         w.c() * connection_similarity(a, b, w) +
         w.i() * interaction_similarity(a, b, w);
}

using SimilarityTable = std::map<UserId, double>;

// Sim(target, j) for every other profile j.
inline SimilarityTable similarity_table(UserId target,
                                        std::span<const UserProfile> profiles,
                                        const SimilarityWeights& w) {
  const UserProfile* self = nullptr;
  for (const UserProfile& p : profiles) {
    if (p.user_id == target) self = &p;
  }
  if (!self) throw DataError("unknown target user " + std::to_string(target));
  SimilarityTable table;
  for (const UserProfile& p : profiles) {
    if (p.user_id != target) table.emplace(p.user_id, unified_similarity(*self, p, w));
  }
  return table;
}

}  // namespace ppsr::social
