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

#include <sys/random.h>

#include <cerrno>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <numbers>
#include <random>
#include <span>
#include <system_error>
#include <utility>
#include <vector>

namespace ppsr {

// Byte source used by key generation, encryption, masking and tokenization.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint64_t next_u64() {
    std::uint8_t buf[8];
    fill(buf);
    std::uint64_t v = 0;
    for (std::uint8_t b : buf) v = (v << 8) | b;
    return v;
  }

  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t uniform(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    for (;;) {
      std::uint64_t v = next_u64();
      if (v < limit) return v % bound;
    }
  }
};

// Kernel CSPRNG. getrandom(2) is safe for concurrent callers.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override {
    std::size_t done = 0;
    while (done < out.size()) {
      ssize_t n = ::getrandom(out.data() + done, out.size() - done, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw std::system_error(errno, std::generic_category(), "getrandom");
      }
      done += static_cast<std::size_t>(n);
    }
  }
};

// Reproducible stream for tests and seeded experiment runs. Not suitable for
// production keys.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  void fill(std::span<std::uint8_t> out) override {
    std::lock_guard<std::mutex> lock(mu_);
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t v = engine_();
      for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
        out[i] = static_cast<std::uint8_t>(v >> (56 - 8 * b));
      }
    }
  }

 private:
  std::mutex mu_;
  std::mt19937_64 engine_;
};

// Portable statistical draws on mt19937_64 for data generation and
// clustering seeds; std distributions differ across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit() * n); }
  double half_normal() {
    double u1 = 1.0 - unit(), u2 = unit();
    return std::abs(std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2));
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ppsr
