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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ppsr/error.hpp"
#include "ppsr/social/sentiment.hpp"
#include "ppsr/social/similarity.hpp"
#include "ppsr/social/text.hpp"

namespace ppsr::social {

struct Edge {
  UserId from;
  UserId to;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Interaction {
  UserId user;
  std::uint32_t article;
  std::string text;  // unused for likes
};

// Raw social-network tables for n_users users indexed 0..n_users-1.
struct SocialData {
  std::size_t n_users = 0;
  std::vector<std::vector<std::string>> publications;  // per user, raw texts
  std::vector<Edge> follows;                           // from follows to
  std::vector<Interaction> likes;
  std::vector<Interaction> comments;
  std::vector<Interaction> reposts;
};

inline std::vector<std::vector<std::string>> publication_tokens(const SocialData& data) {
  std::vector<std::vector<std::string>> out(data.n_users);
  for (std::size_t u = 0; u < data.publications.size() && u < data.n_users; ++u) {
    for (const std::string& text : data.publications[u]) {
      auto toks = tokenize(text);
      out[u].insert(out[u].end(), std::make_move_iterator(toks.begin()),
                    std::make_move_iterator(toks.end()));
    }
  }
  return out;
}

namespace detail {

inline void check_user(UserId u, std::size_t n, const char* what) {
  if (u >= n) {
    throw DataError(std::string(what) + " references user " + std::to_string(u) +
                    " outside [0, " + std::to_string(n) + ")");
  }
}

// Per-user sorted distinct article sets -> co-count rows.
inline std::vector<std::vector<std::int32_t>> co_counts(
    const std::vector<std::vector<std::uint32_t>>& sets) {
  const std::size_t n = sets.size();
  std::vector<std::vector<std::int32_t>> rows(n, std::vector<std::int32_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    rows[i][i] = static_cast<std::int32_t>(sets[i].size());
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t both = 0;
      auto a = sets[i].begin(), b = sets[j].begin();
      while (a != sets[i].end() && b != sets[j].end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++both, ++a, ++b;
        }
      }
      rows[i][j] = rows[j][i] = static_cast<std::int32_t>(both);
    }
  }
  return rows;
}

inline std::vector<std::vector<std::uint32_t>> article_sets(
    std::size_t n, const std::vector<Interaction>& events, const char* what,
    const SentimentClassifier* gate) {
  std::vector<std::set<std::uint32_t>> sets(n);
  for (const Interaction& e : events) {
    check_user(e.user, n, what);
    if (gate) {
      auto toks = tokenize(e.text);
      if (gate->classify(toks) != Sentiment::kPositive) continue;
    }
    sets[e.user].insert(e.article);
  }
  std::vector<std::vector<std::uint32_t>> out(n);
  for (std::size_t u = 0; u < n; ++u) out[u].assign(sets[u].begin(), sets[u].end());
  return out;
}

}  // namespace detail

// Builds every user's profile. Co-counts are numbers of distinct articles both
// users liked (or positively commented on / reposted); the diagonal holds the
// user's own distinct-article total. Comments and reposts pass through the
// sentiment gate. Self-follows are ignored.
inline std::vector<UserProfile> build_profiles(const SocialData& data,
                                               const Corpus& corpus,
                                               const SentimentClassifier& sentiment) {
  const std::size_t n = data.n_users;
  std::vector<UserProfile> profiles(n);
  auto tokens = publication_tokens(data);
  for (std::size_t u = 0; u < n; ++u) {
    profiles[u].user_id = static_cast<UserId>(u);
    if (corpus.size() > 0) {
      profiles[u].publication = build_publication_vector(tokens[u], corpus);
    } else {
      profiles[u].publication = SparseVector(1);
    }
    profiles[u].follows.assign(n, 0);
    profiles[u].friends.assign(n, 0);
  }
  for (const Edge& e : data.follows) {
    detail::check_user(e.from, n, "follow edge");
    detail::check_user(e.to, n, "follow edge");
    if (e.from != e.to) profiles[e.from].follows[e.to] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      profiles[i].friends[k] = profiles[i].follows[k] && profiles[k].follows[i];
    }
  }
  auto likes = detail::co_counts(detail::article_sets(n, data.likes, "like", nullptr));
  auto comments = detail::co_counts(
      detail::article_sets(n, data.comments, "comment", &sentiment));
  auto reposts = detail::co_counts(
      detail::article_sets(n, data.reposts, "repost", &sentiment));
  for (std::size_t u = 0; u < n; ++u) {
    profiles[u].likes = std::move(likes[u]);
    profiles[u].comments = std::move(comments[u]);
    profiles[u].reposts = std::move(reposts[u]);
  }
  return profiles;
}

inline std::vector<UserProfile> build_profiles(const SocialData& data,
                                               std::size_t min_df = 2) {
  auto tokens = publication_tokens(data);
  Corpus corpus = Corpus::build(tokens, min_df);
  return build_profiles(data, corpus, LexiconClassifier::english());
}

}  // namespace ppsr::social
