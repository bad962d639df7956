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

#include <cmath>
#include <cstdint>
#include <string>

#include "ppsr/crypto/bigint.hpp"
#include "ppsr/error.hpp"

namespace ppsr::crypto {

// Non-negative reals as integers: encode(x) = round(x * scale).
class FixedPointCodec {
 public:
  static constexpr std::uint64_t kDefaultScale = 1'000'000;

  explicit FixedPointCodec(std::uint64_t scale = kDefaultScale)
      : FixedPointCodec(scale, scale) {}

  FixedPointCodec(std::uint64_t scale, std::uint64_t max_magnitude)
      : scale_(scale), max_magnitude_(max_magnitude) {
    if (scale == 0) throw ConfigError("fixed-point scale must be positive");
  }

  std::uint64_t scale() const { return scale_; }
  // Largest encodable integer; the default admits reals in [0, 1].
  std::uint64_t max_magnitude() const { return max_magnitude_; }

  std::uint64_t encode(double x) const {
    if (!std::isfinite(x) || x < 0.0) {
      throw DataError("cannot encode " + std::to_string(x) +
                      ": only finite non-negative values are supported");
    }
    double scaled = std::round(x * static_cast<double>(scale_));
    if (scaled > static_cast<double>(max_magnitude_)) {
      throw DataError("fixed-point overflow encoding " + std::to_string(x));
    }
    return static_cast<std::uint64_t>(scaled);
  }

  double decode(std::uint64_t m) const {
    return static_cast<double>(m) / static_cast<double>(scale_);
  }

  double decode(const BigInt& m) const {
    return m.get_d() / static_cast<double>(scale_);
  }

 private:
  std::uint64_t scale_;
  std::uint64_t max_magnitude_;
};

// Largest plaintext the degree aggregation can reach is
// n_users * rank_max * max_magnitude + mask_bound - 1; it must stay below N.
inline bool fits_plaintext_budget(const BigInt& n, std::uint64_t n_users,
                                  std::uint64_t rank_max,
                                  const FixedPointCodec& codec,
                                  const BigInt& mask_bound) {
  BigInt worst = BigInt(static_cast<unsigned long>(n_users)) *
                     BigInt(static_cast<unsigned long>(rank_max)) *
                     BigInt(static_cast<unsigned long>(codec.max_magnitude())) +
                 mask_bound;
  return worst < n;
}

}  // namespace ppsr::crypto
