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

// Seeded synthetic datasets with planted structure.
//
// Items fall into k_true equal-size clusters (shuffled), each split into
// tastes_per_cluster taste subsets. Every view has one feature block per
// cluster; an item's row is a random amplitude times its cluster prototype
// plus half-normal noise. Under the complementary pattern view s gives
// cluster (s+1) mod K the prototype of cluster s, so no single view separates
// every cluster but the views together do.
//
// Users form one group per (cluster, taste) pair and rate their own taste
// subset high (4-5), the rest of their cluster middling (2-3) and other items
// low (1-2), at decreasing densities. With social_signal > 0 users follow,
// write about and like articles mostly within their own group; the signal's
// strength scales every within-group probability. social_signal = 0 yields
// empty social tables.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ppsr/data/dataset.hpp"
#include "ppsr/error.hpp"
#include "ppsr/random.hpp"

namespace ppsr::data {

enum class ViewPattern { kInformative, kComplementary };

inline ViewPattern parse_view_pattern(const std::string& s) {
  if (s == "informative") return ViewPattern::kInformative;
  if (s == "complementary") return ViewPattern::kComplementary;
  throw ConfigError("unknown view pattern '" + s + "' (informative, complementary)");
}

struct SyntheticSpec {
  std::size_t n_items = 150;
  std::size_t n_users = 80;
  std::size_t k_true = 3;
  std::size_t n_views = 2;
  std::size_t features_per_view = 30;
  std::vector<double> noise{0.3};  // per view; a single entry applies to all
  ViewPattern pattern = ViewPattern::kComplementary;
  std::size_t tastes_per_cluster = 2;
  double rating_density = 0.35;
  double social_signal = 1.0;
  std::uint64_t seed = 1;

  double noise_for(std::size_t view) const {
    return noise.size() == 1 ? noise[0] : noise.at(view);
  }

  void validate() const {
    if (k_true == 0 || k_true > n_items) throw ConfigError("synthetic: need 1 <= k_true <= n_items");
    if (n_views == 0) throw ConfigError("synthetic: n_views must be positive");
    if (n_users == 0) throw ConfigError("synthetic: n_users must be positive");
    if (features_per_view < k_true) throw ConfigError("synthetic: features_per_view < k_true");
    if (noise.size() != 1 && noise.size() != n_views) {
      throw ConfigError("synthetic: noise needs 1 or n_views entries");
    }
    for (double z : noise) {
      if (!(z >= 0) || !std::isfinite(z)) throw ConfigError("synthetic: noise must be >= 0");
    }
    if (pattern == ViewPattern::kComplementary && k_true < 2) {
      throw ConfigError("synthetic: complementary views need k_true >= 2");
    }
    if (tastes_per_cluster == 0 || k_true * tastes_per_cluster > n_items) {
      throw ConfigError("synthetic: need 1 <= tastes_per_cluster <= n_items / k_true");
    }
    if (!(rating_density > 0 && rating_density <= 1)) {
      throw ConfigError("synthetic: rating_density must be in (0, 1]");
    }
    if (!(social_signal >= 0 && social_signal <= 1)) {
      throw ConfigError("synthetic: social_signal must be in [0, 1]");
    }
  }
};

inline Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Sampler draw(spec.seed);
  const std::size_t m = spec.n_items, K = spec.k_true, n_u = spec.n_users;
  const std::size_t T = spec.tastes_per_cluster;

  Dataset ds;
  ds.name = "synthetic";
  ds.item_truth.resize(m);
  for (std::size_t i = 0; i < m; ++i) ds.item_truth[i] = static_cast<int>(i % K);
  draw.shuffle(ds.item_truth);
  std::vector<std::size_t> taste(m), seen(K, 0);
  for (std::size_t i = 0; i < m; ++i) taste[i] = seen[ds.item_truth[i]]++ % T;

  for (std::size_t s = 0; s < spec.n_views; ++s) {
    const std::size_t f = spec.features_per_view;
    std::vector<std::size_t> proto(K);
    for (std::size_t c = 0; c < K; ++c) proto[c] = c;
    if (spec.pattern == ViewPattern::kComplementary) proto[(s + 1) % K] = s % K;
    nmf::Matrix v(m, f);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t c = proto[ds.item_truth[i]];
      const std::size_t lo = c * (f / K), hi = c + 1 == K ? f : (c + 1) * (f / K);
      const double amp = 0.5 + draw.unit();
      for (std::size_t j = 0; j < f; ++j) {
        v(i, j) = (j >= lo && j < hi ? amp : 0.0) + spec.noise_for(s) * draw.half_normal();
      }
    }
    ds.views.push_back({std::move(v), static_cast<int>(s)});
    ds.view_names.push_back("view" + std::to_string(s));
  }

  const std::size_t groups = K * T;
  ds.user_groups.resize(n_u);
  for (std::size_t u = 0; u < n_u; ++u) ds.user_groups[u] = static_cast<int>(u % groups);
  draw.shuffle(ds.user_groups);

  const double d = spec.rating_density;
  ds.ratings = protocol::RankMatrix(n_u, m);
  for (std::size_t u = 0; u < n_u; ++u) {
    const std::size_t c = ds.user_groups[u] / T, t = ds.user_groups[u] % T;
    for (std::size_t i = 0; i < m; ++i) {
      const bool same_cluster = static_cast<std::size_t>(ds.item_truth[i]) == c;
      if (same_cluster && taste[i] == t) {
        if (draw.chance(d)) ds.ratings.set(u, i, 4 + static_cast<int>(draw.below(2)));
      } else if (same_cluster) {
        if (draw.chance(d * 0.5)) ds.ratings.set(u, i, 2 + static_cast<int>(draw.below(2)));
      } else if (draw.chance(d * 0.15)) {
        ds.ratings.set(u, i, 1 + static_cast<int>(draw.below(2)));
      }
    }
  }
  ds.user_ids.resize(n_u);
  for (std::size_t u = 0; u < n_u; ++u) ds.user_ids[u] = static_cast<std::int64_t>(u);
  ds.item_ids.resize(m);
  for (std::size_t i = 0; i < m; ++i) ds.item_ids[i] = static_cast<std::int64_t>(i);

  social::SocialData& s = ds.social;
  s.n_users = n_u;
  s.publications.assign(n_u, {});
  const double sig = spec.social_signal;
  if (sig > 0) {
    const auto group = [&](std::size_t u) { return static_cast<std::size_t>(ds.user_groups[u]); };
    for (std::size_t a = 0; a < n_u; ++a) {
      for (std::size_t b = 0; b < n_u; ++b) {
        if (a == b) continue;
        if (draw.chance(group(a) == group(b) ? 0.4 * sig : 0.02 * sig)) {
          s.follows.push_back({static_cast<social::UserId>(a), static_cast<social::UserId>(b)});
        }
      }
    }
    constexpr std::size_t kPosts = 4, kWords = 6, kGroupVocab = 12, kCommonVocab = 40;
    for (std::size_t u = 0; u < n_u; ++u) {
      for (std::size_t p = 0; p < kPosts; ++p) {
        std::string text;
        for (std::size_t w = 0; w < kWords; ++w) {
          if (!text.empty()) text += ' ';
          if (draw.chance(sig)) {
            text += "g" + std::to_string(group(u)) + "w" + std::to_string(draw.below(kGroupVocab));
          } else {
            text += "common" + std::to_string(draw.below(kCommonVocab));
          }
        }
        s.publications[u].push_back(std::move(text));
      }
    }
    constexpr std::size_t kArticlesPerGroup = 10;
    for (std::size_t u = 0; u < n_u; ++u) {
      for (std::size_t a = 0; a < groups * kArticlesPerGroup; ++a) {
        const bool own = a / kArticlesPerGroup == group(u);
        const auto uid = static_cast<social::UserId>(u);
        const auto art = static_cast<std::uint32_t>(a);
        if (draw.chance(own ? 0.4 * sig : 0.03 * sig)) {
          s.likes.push_back({uid, art, {}});
          if (draw.chance(0.4)) {
            s.comments.push_back({uid, art, own ? "love this, great read" : "boring and bad"});
          }
        }
        if (own && draw.chance(0.15 * sig)) s.reposts.push_back({uid, art, "great, recommend"});
      }
    }
  }
  ds.check_shapes();
  return ds;
}

}  // namespace ppsr::data
