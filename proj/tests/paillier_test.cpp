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

#include "ppsr/crypto/paillier.hpp"

#include <gtest/gtest.h>

#include <random>

#include "ppsr/crypto/fixed_point.hpp"
#include "ppsr/crypto/key_io.hpp"

namespace ppsr::crypto {
namespace {

class PaillierTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SeededRandom rng(2024);
    keys_ = new Keypair(keygen(kTestKeyBits, rng));
  }
  static void TearDownTestSuite() {
    delete keys_;
    keys_ = nullptr;
  }

  const PublicKey& pk() const { return keys_->public_key(); }
  BigInt Dec(const Ciphertext& c) const { return keys_->decrypt(c); }

  static Keypair* keys_;
  SeededRandom rng_{7};
};

Keypair* PaillierTest::keys_ = nullptr;

TEST_F(PaillierTest, ModulusHasRequestedBitLength) {
  EXPECT_EQ(pk().bits(), kTestKeyBits);
  EXPECT_EQ(pk().g(), pk().n() + 1);
}

TEST_F(PaillierTest, RoundTripsRandomPlaintexts) {
  for (int i = 0; i < 1000; ++i) {
    BigInt m = random_below(rng_, pk().n());
    ASSERT_EQ(Dec(pk().encrypt(m, rng_)), m);
  }
}

TEST_F(PaillierTest, RoundTripsDomainEdges) {
  EXPECT_EQ(Dec(pk().encrypt(0, rng_)), 0);
  BigInt top = pk().n() - 1;
  EXPECT_EQ(Dec(pk().encrypt(top, rng_)), top);
  EXPECT_EQ(Dec(pk().encrypt(42)), 42);
}

TEST_F(PaillierTest, RejectsOutOfRangePlaintext) {
  EXPECT_THROW(pk().encrypt(pk().n(), rng_), DataError);
  EXPECT_THROW(pk().encrypt(-1, rng_), DataError);
}

TEST_F(PaillierTest, EncryptionIsFresh) {
  for (int i = 0; i < 100; ++i) {
    Ciphertext a = pk().encrypt(42, rng_);
    Ciphertext b = pk().encrypt(42, rng_);
    ASSERT_NE(a.value, b.value);
    ASSERT_EQ(Dec(a), Dec(b));
  }
}

TEST_F(PaillierTest, TamperedCiphertextDoesNotDecryptToOriginal) {
  Ciphertext c = pk().encrypt(42, rng_);
  for (int i = 0; i < 20; ++i) {
    Ciphertext t = c;
    BigInt unit;
    do {
      unit = random_below(rng_, pk().n_squared());
    } while (unit <= 1 || gcd(unit, pk().n()) != 1);
    t.value = (t.value * unit) % pk().n_squared();
    EXPECT_NE(Dec(t), 42);
  }
}

// Multiplying by N^2 - 1 negates the ciphertext; lambda is even, so the
// decryption exponent erases the sign and the plaintext is unchanged.
TEST_F(PaillierTest, NegationIsInvisibleToDecryption) {
  Ciphertext c = pk().encrypt(42, rng_);
  Ciphertext t = c;
  t.value = (t.value * (pk().n_squared() - 1)) % pk().n_squared();
  EXPECT_NE(t.value, c.value);
  EXPECT_EQ(Dec(t), 42);
}

TEST_F(PaillierTest, AdditiveHomomorphism) {
  EXPECT_EQ(Dec(pk().add(pk().encrypt(2, rng_), pk().encrypt(3, rng_))), 5);
  EXPECT_EQ(Dec(pk().add(pk().encrypt(9, rng_), pk().encrypt(0, rng_))), 9);
  for (int i = 0; i < 100; ++i) {
    BigInt a = random_below(rng_, pk().n());
    BigInt b = random_below(rng_, pk().n());
    BigInt expect = (a + b) % pk().n();
    ASSERT_EQ(Dec(pk().add(pk().encrypt(a, rng_), pk().encrypt(b, rng_))), expect);
  }
}

TEST_F(PaillierTest, PlaintextMultiplication) {
  Ciphertext seven = pk().encrypt(7, rng_);
  EXPECT_EQ(Dec(pk().scale(seven, 6)), 42);
  EXPECT_EQ(Dec(pk().scale(seven, 1)), 7);
  EXPECT_EQ(Dec(pk().scale(seven, 0)), 0);
  for (int i = 0; i < 100; ++i) {
    BigInt a = random_below(rng_, pk().n());
    BigInt b = random_below(rng_, pk().n());
    ASSERT_EQ(Dec(pk().scale(pk().encrypt(a, rng_), b)), (a * b) % pk().n());
  }
  EXPECT_THROW(pk().scale(seven, pk().n()), DataError);
}

TEST_F(PaillierTest, WeightedSumChain) {
  for (int inst = 0; inst < 10; ++inst) {
    Ciphertext acc = pk().zero();
    BigInt expect = 0;
    for (int j = 0; j < 20; ++j) {
      BigInt a = random_below(rng_, pk().n());
      BigInt b = random_below(rng_, pk().n());
      acc = pk().add(acc, pk().scale(pk().encrypt(a, rng_), b));
      expect = (expect + a * b) % pk().n();
    }
    ASSERT_EQ(Dec(acc), expect);
  }
}

TEST_F(PaillierTest, KeyMismatchIsRejected) {
  SeededRandom other_rng(555);
  Keypair other = keygen(kTestKeyBits, other_rng);
  Ciphertext c = pk().encrypt(1, rng_);
  EXPECT_THROW(other.decrypt(c), ProtocolError);
  EXPECT_THROW(pk().add(c, other.public_key().encrypt(1, rng_)), ProtocolError);
  Ciphertext bogus{pk().n_squared(), pk().key_id()};
  EXPECT_THROW(Dec(bogus), ProtocolError);
}

TEST(Keygen, RejectsBadSizes) {
  SeededRandom rng(1);
  EXPECT_THROW(keygen(256, rng), ConfigError);
  EXPECT_THROW(keygen(513, rng), ConfigError);
}

TEST(Keygen, SeededKeysAreReproducible) {
  SeededRandom a(77), b(77);
  EXPECT_EQ(keygen(kTestKeyBits, a).public_key(), keygen(kTestKeyBits, b).public_key());
}

TEST(BigIntBytes, RoundTrip) {
  SeededRandom rng(3);
  for (int i = 0; i < 50; ++i) {
    BigInt v = random_bits(rng, 1 + rng.uniform(700));
    EXPECT_EQ(from_bytes(to_bytes(v)), v);
  }
  EXPECT_TRUE(to_bytes(BigInt(0)).empty());
  EXPECT_EQ(to_bytes(BigInt(258)), (std::vector<std::uint8_t>{1, 2}));
}

TEST(FixedPointCodec, EncodesByRounding) {
  FixedPointCodec codec;
  EXPECT_EQ(codec.encode(0.0), 0u);
  EXPECT_EQ(codec.encode(0.5179), 517900u);
  EXPECT_EQ(codec.encode(1.0), 1000000u);
  EXPECT_DOUBLE_EQ(codec.decode(std::uint64_t{250000}), 0.25);
  EXPECT_THROW(codec.encode(1.5), DataError);
  EXPECT_THROW(codec.encode(-0.1), DataError);
  EXPECT_THROW(codec.encode(std::nan("")), DataError);
}

TEST(FixedPointCodec, RoundTripAndLinearity) {
  FixedPointCodec codec;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 0.5);
  for (int i = 0; i < 1000; ++i) {
    double x = unif(rng), y = unif(rng);
    ASSERT_LE(std::abs(codec.decode(codec.encode(x)) - x), 5e-7);
    std::int64_t sum = static_cast<std::int64_t>(codec.encode(x) + codec.encode(y));
    std::int64_t joint = static_cast<std::int64_t>(codec.encode(x + y));
    ASSERT_LE(std::abs(sum - joint), 1);
  }
}

TEST(FixedPointCodec, PlaintextBudget) {
  FixedPointCodec codec;
  BigInt mask = BigInt(1) << 64;
  BigInt small = BigInt(1) << 64;
  BigInt large = BigInt(1) << 511;
  EXPECT_TRUE(fits_plaintext_budget(large, 1000, 5, codec, mask));
  EXPECT_FALSE(fits_plaintext_budget(small, 1u << 20, 5, codec, mask));
}

TEST(KeyFiles, SecretAndPublicRoundTrip) {
  SeededRandom rng(31);
  Keypair keys = keygen(kTestKeyBits, rng);
  Keypair back = parse_secret_key(format_secret_key(keys));
  EXPECT_EQ(back.public_key().n(), keys.public_key().n());
  EXPECT_EQ(back.public_key().key_id(), keys.public_key().key_id());
  BigInt m = 123456789;
  EXPECT_EQ(back.decrypt(keys.public_key().encrypt(m, rng)), m);
  PublicKey pk = parse_public_key(format_public_key(keys.public_key()));
  EXPECT_EQ(keys.decrypt(pk.encrypt(m, rng)), m);
}

TEST(KeyFiles, RejectsMalformedInput) {
  SeededRandom rng(32);
  std::string good = format_secret_key(keygen(kTestKeyBits, rng));
  EXPECT_THROW(parse_secret_key("ppsr-paillier-public 1\nbits 512\nn 5\n"), DataError);
  EXPECT_THROW(parse_secret_key("ppsr-paillier-secret 1\nbits 512\np zz\nq 7\n"), DataError);
  std::string wrong_bits = good;
  wrong_bits.replace(wrong_bits.find("bits 512"), 8, "bits 514");
  EXPECT_THROW(parse_secret_key(wrong_bits), DataError);
  EXPECT_THROW(load_secret_key("/nonexistent/key"), DataError);
}

}  // namespace
}  // namespace ppsr::crypto
