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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ppsr/error.hpp"
#include "ppsr/nmf/multiview_nmf.hpp"
#include "ppsr/protocol/rank_matrix.hpp"
#include "ppsr/social/profiles.hpp"

namespace ppsr::data {

// Everything the pipeline consumes: item views for clustering, the social
// tables for Bob, and the rating matrix for Alice. Users and items are
// densely indexed; the id vectors map back to the source ids.
struct Dataset {
  std::string name;
  std::vector<nmf::ViewMatrix> views;
  std::vector<std::string> view_names;
  social::SocialData social;
  protocol::RankMatrix ratings;
  std::vector<std::int64_t> user_ids;
  std::vector<std::int64_t> item_ids;
  std::vector<int> item_truth;   // planted item clusters (synthetic only)
  std::vector<int> user_groups;  // planted user groups (synthetic only)
  std::vector<std::string> warnings;

  std::size_t n_users() const { return ratings.users(); }
  std::size_t n_items() const { return ratings.items(); }

  void check_shapes() const {
    for (const auto& v : views) {
      if (static_cast<std::size_t>(v.data.rows()) != n_items()) {
        throw DataError("view " + std::to_string(v.view_id) + " has " +
                        std::to_string(v.data.rows()) + " rows, expected " +
                        std::to_string(n_items()));
      }
    }
    if (social.n_users != n_users()) throw DataError("social tables and ratings disagree on n_users");
    if (user_ids.size() != n_users() || item_ids.size() != n_items()) {
      throw DataError("id maps do not match the rating matrix");
    }
    if (!item_truth.empty() && item_truth.size() != n_items()) {
      throw DataError("planted item labels do not match n_items");
    }
  }
};

}  // namespace ppsr::data
