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

// Loaders for the HetRec 2011 dataset layouts. Files are located by name
// inside the dataset directory; the per-kind schemas are:
//
//   lastfm
//     user_artists.dat          userID artistID weight
//     user_friends.dat          userID friendID
//     user_taggedartists.dat    userID artistID tagID day month year
//     tags.dat (optional)       tagID tagValue
//   delicious
//     user_taggedbookmarks.dat  userID bookmarkID tagID day month year hour minute second
//     user_contacts.dat         userID contactID date_day .. date_second (8 columns)
//     tags.dat (optional)       id value
//   movielens-hetrec
//     user_ratedmovies.dat      userID movieID rating date_day .. date_second (9 columns)
//     movie_tags.dat            movieID tagID tagWeight
//     tags.dat (optional)       id value
//
// Item views: 0 = item x tag counts (tag weights for movielens), 1 = item x
// user interactions (log1p listening weight, bookmark tag count, star rating).
// Ratings: star ratings rounded half-up; implicit data is ranked per user by
// quintile of interaction strength (top fifth = rank_max). Follow edges are
// directed as listed. Tag assignments double as comments and their tag
// strings as the user's publications; interactions double as likes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ppsr/data/dataset.hpp"
#include "ppsr/data/tsv.hpp"
#include "ppsr/error.hpp"

namespace ppsr::data {

enum class HetrecKind { kLastfm, kDelicious, kMovielens };

inline HetrecKind parse_hetrec_kind(const std::string& s) {
  if (s == "lastfm") return HetrecKind::kLastfm;
  if (s == "delicious") return HetrecKind::kDelicious;
  if (s == "movielens-hetrec" || s == "movielens") return HetrecKind::kMovielens;
  throw ConfigError("unknown dataset kind '" + s + "' (lastfm, delicious, movielens-hetrec)");
}

inline const char* to_string(HetrecKind k) {
  switch (k) {
    case HetrecKind::kLastfm: return "lastfm";
    case HetrecKind::kDelicious: return "delicious";
    case HetrecKind::kMovielens: return "movielens-hetrec";
  }
  return "?";
}

struct HetrecOptions {
  // Views are dense, so the most active items and most used tags are kept.
  std::size_t max_items = 2000;
  std::size_t max_tags = 1000;
  int rank_max = protocol::RankMatrix::kDefaultRankMax;
};

namespace detail {

struct RawInteraction {
  std::int64_t user, item;
  double value;
};

struct RawTag {
  std::int64_t item, tag;
  double weight;
  std::optional<std::int64_t> user;
};

struct RawData {
  std::vector<RawInteraction> interactions;
  std::vector<RawTag> tags;
  std::vector<std::pair<std::int64_t, std::int64_t>> follows;
  std::map<std::int64_t, std::string> tag_names;
  bool explicit_ratings = false;
  bool log_values = false;
};

inline std::filesystem::path require(const std::filesystem::path& dir, const char* name) {
  auto p = dir / name;
  if (!std::filesystem::exists(p)) throw DataError("missing file: " + p.string());
  return p;
}

inline void read_tag_names(const std::filesystem::path& dir, RawData& raw) {
  auto p = dir / "tags.dat";
  if (!std::filesystem::exists(p)) return;
  TsvTable t = read_tsv(p, {"tagID", "tagValue"});
  for (std::size_t r = 0; r < t.size(); ++r) raw.tag_names[t.integer(r, 0)] = t.rows[r][1];
}

inline void read_follows(const TsvTable& t, RawData& raw) {
  for (std::size_t r = 0; r < t.size(); ++r) {
    raw.follows.emplace_back(t.integer(r, 0), t.integer(r, 1));
  }
}

inline RawData read_lastfm(const std::filesystem::path& dir) {
  RawData raw;
  raw.log_values = true;
  TsvTable ua = read_tsv(require(dir, "user_artists.dat"), {"userID", "artistID", "weight"});
  for (std::size_t r = 0; r < ua.size(); ++r) {
    raw.interactions.push_back(
        {ua.integer(r, 0), ua.integer(r, 1), static_cast<double>(ua.count(r, 2))});
  }
  read_follows(read_tsv(require(dir, "user_friends.dat"), {"userID", "friendID"}), raw);
  TsvTable ut = read_tsv(require(dir, "user_taggedartists.dat"),
                         {"userID", "artistID", "tagID", "day", "month", "year"});
  for (std::size_t r = 0; r < ut.size(); ++r) {
    raw.tags.push_back({ut.integer(r, 1), ut.integer(r, 2), 1.0, ut.integer(r, 0)});
  }
  read_tag_names(dir, raw);
  return raw;
}

inline RawData read_delicious(const std::filesystem::path& dir) {
  RawData raw;
  TsvTable ub = read_tsv(require(dir, "user_taggedbookmarks.dat"),
                         {"userID", "bookmarkID", "tagID", "day", "month", "year", "hour",
                          "minute", "second"});
  std::map<std::pair<std::int64_t, std::int64_t>, double> per_pair;
  for (std::size_t r = 0; r < ub.size(); ++r) {
    std::int64_t u = ub.integer(r, 0), b = ub.integer(r, 1);
    raw.tags.push_back({b, ub.integer(r, 2), 1.0, u});
    per_pair[{u, b}] += 1.0;
  }
  for (const auto& [key, n] : per_pair) raw.interactions.push_back({key.first, key.second, n});
  read_follows(read_tsv(require(dir, "user_contacts.dat"),
                        {"userID", "contactID", "date_day", "date_month", "date_year",
                         "date_hour", "date_minute", "date_second"}),
               raw);
  read_tag_names(dir, raw);
  return raw;
}

inline RawData read_movielens(const std::filesystem::path& dir) {
  RawData raw;
  raw.explicit_ratings = true;
  TsvTable ur = read_tsv(require(dir, "user_ratedmovies.dat"),
                         {"userID", "movieID", "rating", "date_day", "date_month", "date_year",
                          "date_hour", "date_minute", "date_second"});
  for (std::size_t r = 0; r < ur.size(); ++r) {
    double v = ur.real(r, 2);
    if (!(v >= 0)) throw DataError(ur.where(r) + ": negative rating");
    raw.interactions.push_back({ur.integer(r, 0), ur.integer(r, 1), v});
  }
  TsvTable mt = read_tsv(require(dir, "movie_tags.dat"), {"movieID", "tagID", "tagWeight"});
  for (std::size_t r = 0; r < mt.size(); ++r) {
    raw.tags.push_back(
        {mt.integer(r, 0), mt.integer(r, 1), static_cast<double>(mt.count(r, 2)), std::nullopt});
  }
  read_tag_names(dir, raw);
  return raw;
}

// Top-n keys by descending score, ties by ascending key; returned sorted by key.
inline std::vector<std::int64_t> top_keys(const std::map<std::int64_t, double>& score,
                                          std::size_t n) {
  std::vector<std::pair<double, std::int64_t>> v;
  for (const auto& [k, s] : score) v.emplace_back(-s, k);
  std::sort(v.begin(), v.end());
  if (v.size() > n) v.resize(n);
  std::vector<std::int64_t> out;
  for (const auto& e : v) out.push_back(e.second);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::map<std::int64_t, std::uint32_t> index_of(const std::vector<std::int64_t>& ids) {
  std::map<std::int64_t, std::uint32_t> m;
  for (std::size_t i = 0; i < ids.size(); ++i) m[ids[i]] = static_cast<std::uint32_t>(i);
  return m;
}

inline Dataset assemble(RawData raw, const HetrecOptions& opt, std::string name) {
  Dataset ds;
  ds.name = std::move(name);
  if (opt.max_items == 0 || opt.max_tags == 0) throw ConfigError("max_items and max_tags must be positive");

  // Deduplicate interactions, keeping the first occurrence.
  {
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    std::vector<RawInteraction> unique;
    for (const auto& i : raw.interactions) {
      if (seen.insert({i.user, i.item}).second) unique.push_back(i);
    }
    if (unique.size() != raw.interactions.size()) {
      ds.warnings.push_back(std::to_string(raw.interactions.size() - unique.size()) +
                            " duplicate user-item rows collapsed");
    }
    raw.interactions = std::move(unique);
  }

  std::map<std::int64_t, double> item_activity;
  for (const auto& i : raw.interactions) item_activity[i.item] += 1;
  for (const auto& t : raw.tags) item_activity[t.item] += 1;
  ds.item_ids = top_keys(item_activity, opt.max_items);
  if (ds.item_ids.size() < item_activity.size()) {
    ds.warnings.push_back("kept " + std::to_string(ds.item_ids.size()) + " of " +
                          std::to_string(item_activity.size()) + " items");
  }
  auto item_index = index_of(ds.item_ids);

  std::set<std::int64_t> users;
  for (const auto& i : raw.interactions) users.insert(i.user);
  for (const auto& t : raw.tags) {
    if (t.user) users.insert(*t.user);
  }
  for (const auto& [a, b] : raw.follows) users.insert(a), users.insert(b);
  ds.user_ids.assign(users.begin(), users.end());
  auto user_index = index_of(ds.user_ids);
  const std::size_t n_u = ds.user_ids.size(), m = ds.item_ids.size();

  std::map<std::int64_t, double> tag_use;
  for (const auto& t : raw.tags) {
    if (item_index.contains(t.item)) tag_use[t.tag] += t.weight;
  }
  std::vector<std::int64_t> tag_ids = top_keys(tag_use, opt.max_tags);
  if (tag_ids.empty()) throw DataError(ds.name + ": tag view has zero columns (no tag assignments)");
  auto tag_index = index_of(tag_ids);

  nmf::Matrix tag_view = nmf::Matrix::Zero(m, tag_ids.size());
  for (const auto& t : raw.tags) {
    auto i = item_index.find(t.item);
    auto k = tag_index.find(t.tag);
    if (i != item_index.end() && k != tag_index.end()) tag_view(i->second, k->second) += t.weight;
  }
  nmf::Matrix user_view = nmf::Matrix::Zero(m, n_u);
  ds.ratings = protocol::RankMatrix(n_u, m, static_cast<std::uint8_t>(opt.rank_max));
  std::vector<std::vector<std::pair<double, std::uint32_t>>> per_user(n_u);
  for (const auto& i : raw.interactions) {
    auto it = item_index.find(i.item);
    if (it == item_index.end()) continue;
    std::uint32_t u = user_index.at(i.user), k = it->second;
    user_view(k, u) = raw.log_values ? std::log1p(i.value) : i.value;
    per_user[u].emplace_back(i.value, k);
  }
  for (std::size_t u = 0; u < n_u; ++u) {
    auto& items = per_user[u];
    if (raw.explicit_ratings) {
      for (const auto& [v, k] : items) {
        int r = static_cast<int>(std::floor(v + 0.5));
        ds.ratings.set(u, k, std::clamp(r, 1, opt.rank_max));
      }
      continue;
    }
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    const std::size_t n = items.size();
    for (std::size_t p = 0; p < n; ++p) {
      int r = opt.rank_max - static_cast<int>(p * opt.rank_max / n);
      ds.ratings.set(u, items[p].second, r);
    }
  }
  ds.views.push_back({std::move(tag_view), 0});
  ds.views.push_back({std::move(user_view), 1});
  ds.view_names = {"item-tag", "item-user"};

  social::SocialData& s = ds.social;
  s.n_users = n_u;
  s.publications.assign(n_u, {});
  std::set<social::Edge> edges;
  std::size_t dup_edges = 0;
  for (const auto& [a, b] : raw.follows) {
    social::Edge e{user_index.at(a), user_index.at(b)};
    if (!edges.insert(e).second) ++dup_edges;
  }
  if (dup_edges) ds.warnings.push_back(std::to_string(dup_edges) + " duplicate follow edges collapsed");
  s.follows.assign(edges.begin(), edges.end());
  if (raw.follows.empty()) ds.warnings.push_back("no social graph in this dataset");
  for (const auto& i : raw.interactions) {
    auto it = item_index.find(i.item);
    if (it != item_index.end()) s.likes.push_back({user_index.at(i.user), it->second, {}});
  }
  for (const auto& t : raw.tags) {
    if (!t.user) continue;
    auto name_it = raw.tag_names.find(t.tag);
    std::string text = name_it != raw.tag_names.end() ? name_it->second : "tag" + std::to_string(t.tag);
    std::uint32_t u = user_index.at(*t.user);
    auto it = item_index.find(t.item);
    if (it != item_index.end()) s.comments.push_back({u, it->second, text});
    s.publications[u].push_back(std::move(text));
  }
  ds.check_shapes();
  return ds;
}

}  // namespace detail

inline Dataset load_hetrec(const std::filesystem::path& dir, HetrecKind kind,
                           const HetrecOptions& options = {}) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  detail::RawData raw;
  switch (kind) {
    case HetrecKind::kLastfm: raw = detail::read_lastfm(dir); break;
    case HetrecKind::kDelicious: raw = detail::read_delicious(dir); break;
    case HetrecKind::kMovielens: raw = detail::read_movielens(dir); break;
  }
  return detail::assemble(std::move(raw), options, to_string(kind));
}

}  // namespace ppsr::data
