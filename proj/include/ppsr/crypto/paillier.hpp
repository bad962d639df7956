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

// Paillier cryptosystem with g = N + 1.
//
//   Enc(m; r) = (1 + mN) r^N mod N^2
//   Dec(c)    = L(c^lambda mod N^2) * mu mod N,  L(x) = (x - 1) / N,
//               lambda = lcm(p - 1, q - 1), mu = lambda^-1 mod N
//
// Multiplying ciphertexts adds plaintexts; raising a ciphertext to b
// multiplies its plaintext by b (both mod N).

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppsr/crypto/bigint.hpp"
#include "ppsr/error.hpp"
#include "ppsr/random.hpp"

namespace ppsr::crypto {

struct Ciphertext {
  BigInt value;
  std::uint64_t key_id = 0;

  friend bool operator==(const Ciphertext& a, const Ciphertext& b) {
    return a.key_id == b.key_id && a.value == b.value;
  }
};

class PublicKey {
 public:
  PublicKey() = default;

  explicit PublicKey(BigInt n) : n_(std::move(n)) {
    if (n_ <= 1) throw DataError("Paillier modulus must exceed 1");
    n2_ = n_ * n_;
    g_ = n_ + 1;
    bits_ = static_cast<unsigned>(bit_length(n_));
    key_id_ = fnv1a64(to_bytes(n_));
  }

  const BigInt& n() const { return n_; }
  const BigInt& n_squared() const { return n2_; }
  const BigInt& g() const { return g_; }
  unsigned bits() const { return bits_; }
  std::uint64_t key_id() const { return key_id_; }

  Ciphertext encrypt(const BigInt& m, RandomSource& rng) const {
    if (m < 0 || m >= n_) {
      throw DataError("plaintext out of range [0, N)");
    }
    BigInt r;
    do {
      r = random_below(rng, n_);
    } while (r == 0 || gcd(r, n_) != 1);
    BigInt gm = (1 + m * n_) % n2_;
    BigInt c = (gm * powm(r, n_, n2_)) % n2_;
    return Ciphertext{std::move(c), key_id_};
  }

  Ciphertext encrypt(const BigInt& m) const {
    SystemRandom rng;
    return encrypt(m, rng);
  }

  // E(a) * E(b) mod N^2 decrypts to a + b mod N.
  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const {
    check(a);
    check(b);
    return Ciphertext{(a.value * b.value) % n2_, key_id_};
  }

  // E(a)^b mod N^2 decrypts to a * b mod N.
  Ciphertext scale(const Ciphertext& a, const BigInt& b) const {
    check(a);
    if (b < 0 || b >= n_) throw DataError("scalar out of range [0, N)");
    return Ciphertext{powm(a.value, b, n2_), key_id_};
  }

  // Deterministic encryption of 0 (r = 1); the neutral element for add().
  Ciphertext zero() const { return Ciphertext{BigInt(1), key_id_}; }

  void check(const Ciphertext& c) const {
    if (c.key_id != key_id_) throw ProtocolError("ciphertext key mismatch");
    if (c.value <= 0 || c.value >= n2_) {
      throw ProtocolError("ciphertext out of range (0, N^2)");
    }
  }

  friend bool operator==(const PublicKey& a, const PublicKey& b) {
    return a.n_ == b.n_;
  }

 private:
  BigInt n_;
  BigInt n2_;
  BigInt g_;
  unsigned bits_ = 0;
  std::uint64_t key_id_ = 0;
};

struct SecretKey {
  BigInt p;
  BigInt q;
  BigInt lambda;
  BigInt mu;
};

class Keypair {
 public:
  Keypair(PublicKey pub, SecretKey sec) : pub_(std::move(pub)), sec_(std::move(sec)) {}

  // Rebuilds the secret material from the prime factors.
  static Keypair from_primes(const BigInt& p, const BigInt& q) {
    if (p == q) throw DataError("Paillier primes must differ");
    PublicKey pub(p * q);
    BigInt pm1 = p - 1, qm1 = q - 1;
    BigInt lambda;
    mpz_lcm(lambda.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
    BigInt mu;
    if (mpz_invert(mu.get_mpz_t(), lambda.get_mpz_t(), pub.n().get_mpz_t()) == 0) {
      throw DataError("lambda is not invertible mod N");
    }
    return Keypair(std::move(pub), SecretKey{p, q, lambda, mu});
  }

  const PublicKey& public_key() const { return pub_; }
  const SecretKey& secret_key() const { return sec_; }

  BigInt decrypt(const Ciphertext& c) const {
    pub_.check(c);
    BigInt u = powm(c.value, sec_.lambda, pub_.n_squared());
    BigInt l = (u - 1) / pub_.n();
    return (l * sec_.mu) % pub_.n();
  }

 private:
  PublicKey pub_;
  SecretKey sec_;
};

namespace detail {

// Random prime with exactly `bits` bits and the top two bits set, so the
// product of two such primes has exactly 2 * bits bits.
inline BigInt random_prime(RandomSource& rng, std::size_t bits) {
  constexpr int kAttempts = 64;
  for (int a = 0; a < kAttempts; ++a) {
    BigInt cand = random_bits(rng, bits);
    mpz_setbit(cand.get_mpz_t(), bits - 1);
    mpz_setbit(cand.get_mpz_t(), bits - 2);
    mpz_setbit(cand.get_mpz_t(), 0);
    BigInt p;
    mpz_nextprime(p.get_mpz_t(), cand.get_mpz_t());
    if (bit_length(p) == bits && mpz_probab_prime_p(p.get_mpz_t(), 40) > 0) {
      return p;
    }
  }
  throw DataError("prime generation failed after bounded retries");
}

}  // namespace detail

inline constexpr unsigned kDefaultKeyBits = 2048;
inline constexpr unsigned kTestKeyBits = 512;

inline Keypair keygen(unsigned bits, RandomSource& rng) {
  if (bits < 512 || bits % 2 != 0) {
    throw ConfigError("key size must be an even number of bits >= 512");
  }
  constexpr int kAttempts = 16;
  for (int a = 0; a < kAttempts; ++a) {
    BigInt p = detail::random_prime(rng, bits / 2);
    BigInt q = detail::random_prime(rng, bits / 2);
    if (p == q) continue;
    BigInt n = p * q;
    if (bit_length(n) != bits) continue;
    if (gcd(n, (p - 1) * (q - 1)) != 1) continue;
    return Keypair::from_primes(p, q);
  }
  throw DataError("key generation failed after bounded retries");
}

inline Keypair keygen(unsigned bits = kDefaultKeyBits) {
  SystemRandom rng;
  return keygen(bits, rng);
}

}  // namespace ppsr::crypto
