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

namespace ppsr::protocol {

// Dense n_users x n_items matrix of integer ranking scores, 0 = unrated.
class RankMatrix {
 public:
  static constexpr std::uint8_t kDefaultRankMax = 5;

  RankMatrix() = default;
  RankMatrix(std::size_t n_users, std::size_t n_items,
             std::uint8_t rank_max = kDefaultRankMax)
      : n_users_(n_users), n_items_(n_items), rank_max_(rank_max),
        data_(n_users * n_items, 0) {
    if (rank_max == 0) throw ConfigError("rank_max must be positive");
  }

  std::size_t users() const { return n_users_; }
  std::size_t items() const { return n_items_; }
  std::uint8_t rank_max() const { return rank_max_; }

  std::uint8_t at(std::size_t user, std::size_t item) const {
    check(user, item);
    return data_[user * n_items_ + item];
  }

  void set(std::size_t user, std::size_t item, int rank) {
    check(user, item);
    if (rank < 0 || rank > rank_max_) {
      throw DataError("rank " + std::to_string(rank) + " outside [0, " +
                      std::to_string(rank_max_) + "]");
    }
    data_[user * n_items_ + item] = static_cast<std::uint8_t>(rank);
  }

 private:
  void check(std::size_t user, std::size_t item) const {
    if (user >= n_users_ || item >= n_items_) {
      throw DataError("rank index (" + std::to_string(user) + ", " +
                      std::to_string(item) + ") out of range");
    }
  }

  std::size_t n_users_ = 0;
  std::size_t n_items_ = 0;
  std::uint8_t rank_max_ = kDefaultRankMax;
  std::vector<std::uint8_t> data_;
};

}  // namespace ppsr::protocol
