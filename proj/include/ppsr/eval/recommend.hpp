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

// Recommendation experiment for one seed.
//
// Users are split 75/25. Each test user reveals observed_per_user of their
// rated items; the rest are held out and the held-out items they rated at or
// above relevant_threshold are their relevant set. Alice's rank matrix holds
// every training rating plus the test users' observed ratings only.
//
// Four recommenders:
//   RM-SV   clustering list from single-view NMF
//   RM-MV   clustering list from multi-view NMF
//   RM-SVS  RM-SV merged with the socialized list
//   PPSR    RM-MV merged with the socialized list
//
// A clustering list holds the unobserved items sharing a cluster with the
// user's observed liked items (all observed items when none is liked),
// most popular first. The socialized list orders every unobserved item by
// Degree = sum_j Sim(u, j) Rank[j][k], computed in the clear or through the
// two-party protocol. When every degree ties (no usable social signal) the
// socialized list carries no information and the merged models fall back to
// their clustering list.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ppsr/crypto/fixed_point.hpp"
#include "ppsr/crypto/paillier.hpp"
#include "ppsr/data/dataset.hpp"
#include "ppsr/error.hpp"
#include "ppsr/eval/metrics.hpp"
#include "ppsr/nmf/multiview_nmf.hpp"
#include "ppsr/protocol/ppsr_protocol.hpp"
#include "ppsr/random.hpp"
#include "ppsr/social/profiles.hpp"

namespace ppsr::eval {

using protocol::ItemId;
using protocol::RankMatrix;
using social::UserId;

enum class Route { kPlaintext, kInProcess, kSocket };

inline Route parse_route(const std::string& s) {
  if (s == "plaintext") return Route::kPlaintext;
  if (s == "inproc") return Route::kInProcess;
  if (s == "socket") return Route::kSocket;
  throw ConfigError("unknown route '" + s + "' (plaintext, inproc, socket)");
}

inline const std::array<const char*, 4> kModels = {"RM-SV", "RM-MV", "RM-SVS", "PPSR"};

struct RecommendSettings {
  double train_fraction = 0.75;
  std::size_t observed_per_user = 3;
  int relevant_threshold = 4;
  int k_min = 3;
  int k_max = 10;
  std::size_t single_view = 0;
  nmf::MultiViewConfig nmf = nmf::MultiViewConfig::defaults(2, 3);
  social::SimilarityWeights weights;
  std::size_t min_df = 2;
  Route route = Route::kPlaintext;
  crypto::FixedPointCodec codec = crypto::FixedPointCodec();

  void validate(const data::Dataset& ds) const {
    if (!(train_fraction > 0 && train_fraction < 1)) {
      throw ConfigError("train_fraction must be in (0, 1)");
    }
    if (observed_per_user == 0) throw ConfigError("observed_per_user must be positive");
    if (relevant_threshold < 1 || relevant_threshold > ds.ratings.rank_max()) {
      throw ConfigError("relevant_threshold outside [1, rank_max]");
    }
    if (k_min < 1 || k_max < k_min) throw ConfigError("need 1 <= k_min <= k_max");
    if (single_view >= ds.views.size()) throw ConfigError("single_view index out of range");
    nmf.validate(ds.views.size());
  }
};

struct EvalSplit {
  std::uint64_t seed = 0;
  std::vector<UserId> train;
  std::vector<UserId> test;
  std::vector<std::vector<ItemId>> observed;  // per test user, ascending
  std::vector<std::set<ItemId>> relevant;     // per test user
};

inline EvalSplit make_split(const RankMatrix& ratings, const RecommendSettings& s,
                            std::uint64_t seed) {
  const std::size_t n = ratings.users();
  if (n < 2) throw DataError("need at least two users to split");
  Sampler rng(seed);
  std::vector<UserId> users(n);
  for (std::size_t u = 0; u < n; ++u) users[u] = static_cast<UserId>(u);
  rng.shuffle(users);
  std::size_t n_train = static_cast<std::size_t>(s.train_fraction * n + 0.5);
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  EvalSplit split;
  split.seed = seed;
  split.train.assign(users.begin(), users.begin() + n_train);
  split.test.assign(users.begin() + n_train, users.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  for (UserId u : split.test) {
    std::vector<ItemId> rated;
    for (std::size_t i = 0; i < ratings.items(); ++i) {
      if (ratings.at(u, i) > 0) rated.push_back(static_cast<ItemId>(i));
    }
    rng.shuffle(rated);
    const std::size_t k = std::min(s.observed_per_user, rated.size());
    std::vector<ItemId> obs(rated.begin(), rated.begin() + k);
    std::sort(obs.begin(), obs.end());
    std::set<ItemId> rel;
    for (std::size_t j = k; j < rated.size(); ++j) {
      if (ratings.at(u, rated[j]) >= s.relevant_threshold) rel.insert(rated[j]);
    }
    split.observed.push_back(std::move(obs));
    split.relevant.push_back(std::move(rel));
  }
  return split;
}

// Alice's view of the ratings: training users in full, test users observed only.
inline RankMatrix visible_ratings(const RankMatrix& ratings, const EvalSplit& split) {
  RankMatrix out(ratings.users(), ratings.items(), ratings.rank_max());
  for (UserId u : split.train) {
    for (std::size_t i = 0; i < ratings.items(); ++i) out.set(u, i, ratings.at(u, i));
  }
  for (std::size_t t = 0; t < split.test.size(); ++t) {
    for (ItemId i : split.observed[t]) out.set(split.test[t], i, ratings.at(split.test[t], i));
  }
  return out;
}

// Items by descending count of ratings >= threshold, then rating sum, then id.
inline std::vector<std::size_t> popularity_rank(const RankMatrix& r, int threshold) {
  std::vector<std::pair<long, long>> score(r.items(), {0, 0});
  for (std::size_t u = 0; u < r.users(); ++u) {
    for (std::size_t i = 0; i < r.items(); ++i) {
      const int v = r.at(u, i);
      score[i].first += v >= threshold;
      score[i].second += v;
    }
  }
  std::vector<std::size_t> order(r.items());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  std::vector<std::size_t> pos(r.items());
  for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = p;
  return pos;
}

inline protocol::CandidateList clustering_list(const std::vector<int>& assignment,
                                               const std::vector<ItemId>& observed,
                                               const RankMatrix& visible, UserId user,
                                               int threshold,
                                               const std::vector<std::size_t>& popularity) {
  std::set<int> clusters;
  for (ItemId i : observed) {
    if (visible.at(user, i) >= threshold) clusters.insert(assignment[i]);
  }
  if (clusters.empty()) {
    for (ItemId i : observed) clusters.insert(assignment[i]);
  }
  std::set<ItemId> seen(observed.begin(), observed.end());
  std::vector<ItemId> items;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (clusters.contains(assignment[i]) && !seen.contains(static_cast<ItemId>(i))) {
      items.push_back(static_cast<ItemId>(i));
    }
  }
  std::sort(items.begin(), items.end(),
            [&](ItemId a, ItemId b) { return popularity[a] < popularity[b]; });
  return {protocol::Provenance::kClustering, std::move(items)};
}

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::map<std::string, std::vector<CurvePoint>> curves;
  std::map<std::string, std::vector<std::vector<ItemId>>> lists;  // per test user
  std::size_t test_users = 0;
  std::size_t degenerate_users = 0;
};

inline std::uint64_t token_seed(std::uint64_t seed, UserId user) {
  return (seed * 0x9E3779B97F4A7C15ull) ^ (static_cast<std::uint64_t>(user) + 1);
}

// Socialized list for one test user. The protocol routes need keys.
inline protocol::CandidateList socialized_list(const social::SimilarityTable& table,
                                               const RankMatrix& visible, UserId user,
                                               const std::vector<ItemId>& candidates,
                                               const RecommendSettings& s,
                                               std::uint64_t seed,
                                               const crypto::Keypair* keys, bool* degenerate) {
  protocol::AliceOptions opts;
  opts.codec = s.codec;
  opts.items = candidates;
  if (s.route == Route::kPlaintext) {
    SeededRandom tokens(token_seed(seed, user));
    return protocol::plaintext_socialized_list(table, visible, user, opts, tokens, degenerate);
  }
  if (!keys) throw ConfigError("protocol route requires a keypair");
  protocol::AliceParty alice(visible, opts, std::make_shared<SeededRandom>(token_seed(seed, user)));
  protocol::BobParty bob(*keys, [&](UserId) { return table; }, s.codec);
  protocol::Channel ch = s.route == Route::kSocket ? protocol::make_loopback_socket_channel()
                                                   : protocol::make_in_process_channel();
  protocol::ProtocolResult r = protocol::run_protocol(alice, bob, user, ch);
  auto violations = protocol::validate_transcript(r.transcript);
  if (!violations.empty()) throw ProtocolError("transcript check failed: " + violations.front());
  *degenerate = r.degenerate;
  return r.list;
}

inline SeedOutcome evaluate_recommenders(const data::Dataset& ds,
                                         const std::vector<social::UserProfile>& profiles,
                                         const RecommendSettings& s, std::uint64_t seed,
                                         const crypto::Keypair* keys = nullptr) {
  s.validate(ds);
  if (profiles.size() != ds.n_users()) throw DataError("profiles do not cover every user");
  EvalSplit split = make_split(ds.ratings, s, seed);
  RankMatrix visible = visible_ratings(ds.ratings, split);
  auto popularity = popularity_rank(visible, s.relevant_threshold);

  nmf::MultiViewConfig cfg = s.nmf;
  cfg.seed = seed;
  std::vector<int> sv =
      nmf::nmf_factorize(ds.views[s.single_view], cfg.K, cfg).assignment;
  std::vector<int> mv = nmf::multiview_factorize(ds.views, cfg).assignment;

  SeedOutcome out;
  out.seed = seed;
  out.test_users = split.test.size();
  for (const char* m : kModels) out.lists[m].resize(split.test.size());

  for (std::size_t t = 0; t < split.test.size(); ++t) {
    const UserId u = split.test[t];
    const auto& obs = split.observed[t];
    auto sv_list = clustering_list(sv, obs, visible, u, s.relevant_threshold, popularity);
    auto mv_list = clustering_list(mv, obs, visible, u, s.relevant_threshold, popularity);

    std::vector<ItemId> candidates;
    for (std::size_t i = 0; i < ds.n_items(); ++i) {
      if (!std::binary_search(obs.begin(), obs.end(), static_cast<ItemId>(i))) {
        candidates.push_back(static_cast<ItemId>(i));
      }
    }
    bool degenerate = true;
    protocol::CandidateList social_list;
    if (!candidates.empty() && ds.n_users() > 1) {
      auto table = social::similarity_table(u, profiles, s.weights);
      social_list = socialized_list(table, visible, u, candidates, s, seed, keys, &degenerate);
    }
    if (degenerate) ++out.degenerate_users;

    auto truncate = [&](std::vector<ItemId> v) {
      if (v.size() > static_cast<std::size_t>(s.k_max)) v.resize(s.k_max);
      return v;
    };
    out.lists["RM-SV"][t] = truncate(sv_list.items);
    out.lists["RM-MV"][t] = truncate(mv_list.items);
    out.lists["RM-SVS"][t] =
        degenerate ? truncate(sv_list.items) : protocol::merge_lists(social_list, sv_list, s.k_max).items;
    out.lists["PPSR"][t] =
        degenerate ? truncate(mv_list.items) : protocol::merge_lists(social_list, mv_list, s.k_max).items;
  }
  for (const char* m : kModels) {
    out.curves[m] = precision_recall_at_k(out.lists[m], split.relevant, s.k_min, s.k_max);
  }
  return out;
}

inline double precision_at(const std::vector<CurvePoint>& curve, int k) {
  for (const auto& p : curve) {
    if (p.k == k) return p.precision;
  }
  throw ConfigError("k=" + std::to_string(k) + " not on the curve");
}

}  // namespace ppsr::eval
