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

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ppsr/error.hpp"
#include "ppsr/random.hpp"

namespace ppsr::crypto {

using BigInt = mpz_class;

// Big-endian magnitude; zero encodes as an empty byte string.
inline std::vector<std::uint8_t> to_bytes(const BigInt& v) {
  if (sgn(v) < 0) throw DataError("cannot serialize a negative integer");
  std::size_t count = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  std::vector<std::uint8_t> out(count);
  if (sgn(v) == 0) return {};
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(written);
  return out;
}

inline BigInt from_bytes(std::span<const std::uint8_t> bytes) {
  BigInt v;
  if (!bytes.empty()) mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return v;
}

inline std::size_t bit_length(const BigInt& v) {
  return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline BigInt random_bits(RandomSource& rng, std::size_t bits) {
  std::vector<std::uint8_t> buf((bits + 7) / 8);
  rng.fill(buf);
  std::size_t extra = buf.size() * 8 - bits;
  if (!buf.empty() && extra) buf[0] &= static_cast<std::uint8_t>(0xFF >> extra);
  return from_bytes(buf);
}

// Uniform in [0, bound) by rejection; bound > 0.
inline BigInt random_below(RandomSource& rng, const BigInt& bound) {
  std::size_t bits = bit_length(bound);
  for (;;) {
    BigInt v = random_bits(rng, bits);
    if (v < bound) return v;
  }
}

inline BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ppsr::crypto
