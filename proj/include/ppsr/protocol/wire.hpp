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

// Frame layout (all integers big-endian):
//
//   0x50 | 0x01 | type | u32 payload length | payload
//
// Payload fields: counts and user ids are u32; big integers are a u32 byte
// length followed by the magnitude; item tokens are 16 raw bytes.
//
//   0x01 scores          u32 target | u32 key bits | bigint N | u32 count |
//                        count x (u32 user | bigint ciphertext)
//   0x02 masked degrees  u32 count | count x (token | bigint ciphertext)
//   0x03 token order     u32 count | count x token

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ppsr/crypto/bigint.hpp"
#include "ppsr/crypto/paillier.hpp"
#include "ppsr/error.hpp"

namespace ppsr::protocol {

using crypto::BigInt;
using crypto::Ciphertext;
using crypto::PublicKey;
using UserId = std::uint32_t;
using ItemId = std::uint32_t;
using ItemToken = std::array<std::uint8_t, 16>;

inline constexpr std::uint8_t kMagic = 0x50;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 7;
inline constexpr std::uint32_t kMaxPayload = 64u << 20;

enum class MessageType : std::uint8_t {
  kScores = 0x01,
  kMaskedDegrees = 0x02,
  kTokenOrder = 0x03,
};

inline const char* to_string(MessageType t) {
  switch (t) {
    case MessageType::kScores: return "scores";
    case MessageType::kMaskedDegrees: return "masked-degrees";
    case MessageType::kTokenOrder: return "token-order";
  }
  return "unknown";
}

struct Frame {
  MessageType type;
  std::vector<std::uint8_t> payload;
};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void bigint(const BigInt& v) {
    auto b = crypto::to_bytes(v);
    u32(static_cast<std::uint32_t>(b.size()));
    bytes(b);
  }
  void token(const ItemToken& t) { bytes(t); }

  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  BigInt bigint() { return crypto::from_bytes(bytes(u32())); }
  ItemToken token() {
    ItemToken t;
    auto b = bytes(t.size());
    std::copy(b.begin(), b.end(), t.begin());
    return t;
  }
  // Count of records each at least min_record bytes long.
  std::uint32_t count(std::size_t min_record) {
    std::uint32_t n = u32();
    if (min_record && n > remaining() / min_record) {
      throw ProtocolError("framing error: record count exceeds payload");
    }
    return n;
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  void expect_end() const {
    if (remaining() != 0) throw ProtocolError("framing error: trailing payload bytes");
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw ProtocolError("framing error: truncated payload");
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

inline std::vector<std::uint8_t> encode_frame(const Frame& f) {
  if (f.payload.size() > kMaxPayload) throw ProtocolError("payload too large");
  ByteWriter w;
  w.u8(kMagic);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(f.type));
  w.u32(static_cast<std::uint32_t>(f.payload.size()));
  w.bytes(f.payload);
  return w.take();
}

// Validates the 7-byte header and returns (type, payload length).
inline std::pair<MessageType, std::uint32_t> decode_header(
    std::span<const std::uint8_t> header) {
  if (header.size() < kHeaderSize) throw ProtocolError("framing error: short header");
  if (header[0] != kMagic) throw ProtocolError("framing error: bad magic byte");
  if (header[1] != kVersion) throw ProtocolError("framing error: unsupported version");
  std::uint8_t t = header[2];
  if (t < 0x01 || t > 0x03) throw ProtocolError("framing error: unknown message type");
  std::uint32_t len = (std::uint32_t{header[3]} << 24) | (std::uint32_t{header[4]} << 16) |
                      (std::uint32_t{header[5]} << 8) | std::uint32_t{header[6]};
  if (len > kMaxPayload) throw ProtocolError("framing error: payload too large");
  return {static_cast<MessageType>(t), len};
}

inline Frame decode_frame(std::span<const std::uint8_t> bytes) {
  auto [type, len] = decode_header(bytes);
  if (bytes.size() != kHeaderSize + len) {
    throw ProtocolError("framing error: length field disagrees with frame size");
  }
  auto p = bytes.subspan(kHeaderSize);
  return Frame{type, std::vector<std::uint8_t>(p.begin(), p.end())};
}

// ---- Message bodies ------------------------------------------------------

struct ScoresMessage {
  UserId target = 0;
  PublicKey public_key;
  std::vector<std::pair<UserId, Ciphertext>> scores;
};

struct MaskedDegreesMessage {
  std::vector<std::pair<ItemToken, Ciphertext>> degrees;
};

struct TokenOrderMessage {
  std::vector<ItemToken> tokens;
};

inline void write_public_key(ByteWriter& w, const PublicKey& pk) {
  w.u32(pk.bits());
  w.bigint(pk.n());
}

inline PublicKey read_public_key(ByteReader& r) {
  std::uint32_t bits = r.u32();
  BigInt n = r.bigint();
  if (crypto::bit_length(n) != bits || n <= 1) {
    throw ProtocolError("public key bit length disagrees with modulus");
  }
  return PublicKey(n);
}

inline Frame encode(const ScoresMessage& m) {
  ByteWriter w;
  w.u32(m.target);
  write_public_key(w, m.public_key);
  w.u32(static_cast<std::uint32_t>(m.scores.size()));
  for (const auto& [user, c] : m.scores) {
    w.u32(user);
    w.bigint(c.value);
  }
  return Frame{MessageType::kScores, w.take()};
}

inline Frame encode(const MaskedDegreesMessage& m) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(m.degrees.size()));
  for (const auto& [tok, c] : m.degrees) {
    w.token(tok);
    w.bigint(c.value);
  }
  return Frame{MessageType::kMaskedDegrees, w.take()};
}

inline Frame encode(const TokenOrderMessage& m) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(m.tokens.size()));
  for (const auto& tok : m.tokens) w.token(tok);
  return Frame{MessageType::kTokenOrder, w.take()};
}

inline void expect_type(const Frame& f, MessageType t) {
  if (f.type != t) {
    throw ProtocolError(std::string("out-of-order message: expected ") + to_string(t) +
                        ", got " + to_string(f.type));
  }
}

inline ScoresMessage decode_scores(const Frame& f) {
  expect_type(f, MessageType::kScores);
  ByteReader r(f.payload);
  ScoresMessage m;
  m.target = r.u32();
  m.public_key = read_public_key(r);
  std::uint32_t n = r.count(8);
  m.scores.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    UserId u = r.u32();
    Ciphertext c{r.bigint(), m.public_key.key_id()};
    m.public_key.check(c);
    m.scores.emplace_back(u, std::move(c));
  }
  r.expect_end();
  return m;
}

// Ciphertexts are bound to the receiver's key.
inline MaskedDegreesMessage decode_masked_degrees(const Frame& f, const PublicKey& pk) {
  expect_type(f, MessageType::kMaskedDegrees);
  ByteReader r(f.payload);
  MaskedDegreesMessage m;
  std::uint32_t n = r.count(20);
  m.degrees.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    ItemToken tok = r.token();
    Ciphertext c{r.bigint(), pk.key_id()};
    pk.check(c);
    m.degrees.emplace_back(tok, std::move(c));
  }
  r.expect_end();
  return m;
}

inline TokenOrderMessage decode_token_order(const Frame& f) {
  expect_type(f, MessageType::kTokenOrder);
  ByteReader r(f.payload);
  TokenOrderMessage m;
  std::uint32_t n = r.count(16);
  m.tokens.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) m.tokens.push_back(r.token());
  r.expect_end();
  return m;
}

}  // namespace ppsr::protocol
