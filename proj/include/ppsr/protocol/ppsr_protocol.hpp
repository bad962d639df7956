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

// Two-party socialized recommendation.
//
// Bob (social provider) holds the Paillier key and the similarity scores;
// Alice (recommender) holds the rank matrix. For a target user u:
//
//   1. Bob -> Alice   pk, E(encode(Sim(u, j))) for every other user j
//   2. Alice -> Bob   per item k under a fresh random token:
//                     prod_j E(Sim(u, j))^Rank[j][k] * E(r)
//                     (one mask r shared by all items, items shuffled)
//   3. Bob -> Alice   tokens sorted by decrypted degree, descending; ties by
//                     ascending token bytes
//   4. Alice          maps tokens back to item ids.
//
// Bob sees the ordering and pairwise degree differences but not the absolute
// level, the items, or any rank; Alice sees only ciphertexts and tokens.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ppsr/crypto/fixed_point.hpp"
#include "ppsr/crypto/paillier.hpp"
#include "ppsr/error.hpp"
#include "ppsr/protocol/rank_matrix.hpp"
#include "ppsr/protocol/transport.hpp"
#include "ppsr/protocol/wire.hpp"
#include "ppsr/random.hpp"
#include "ppsr/social/similarity.hpp"

namespace ppsr::protocol {

using crypto::FixedPointCodec;
using crypto::Keypair;
using social::SimilarityTable;

enum class Provenance { kSocialized, kClustering, kMerged };

struct CandidateList {
  Provenance provenance = Provenance::kSocialized;
  std::vector<ItemId> items;

  friend bool operator==(const CandidateList&, const CandidateList&) = default;
};

using TokenOrder = std::vector<ItemToken>;
using TokenMap = std::map<ItemToken, ItemId>;

struct MaskedDegreeBatch {
  MaskedDegreesMessage message;  // what Bob receives
  BigInt mask;
  TokenMap token_map;            // stays with Alice
};

// Masks are drawn from [0, 2^64).
inline BigInt mask_bound() { return BigInt(1) << 64; }

// ---- Bob: similarity encryption -----------------------------------------

inline ScoresMessage bob_send_similarities(UserId target, const SimilarityTable& table,
                                           const Keypair& keys,
                                           const FixedPointCodec& codec,
                                           RandomSource& rng) {
  ScoresMessage m;
  m.target = target;
  m.public_key = keys.public_key();
  for (const auto& [user, sim] : table) {
    if (user == target) continue;
    BigInt encoded(static_cast<unsigned long>(codec.encode(sim)));
    m.scores.emplace_back(user, keys.public_key().encrypt(encoded, rng));
  }
  return m;
}

// ---- Alice: encrypted degrees -------------------------------------------

// count distinct random 128-bit tokens.
inline std::vector<ItemToken> assign_tokens(std::size_t count, RandomSource& rng) {
  std::vector<ItemToken> out;
  std::set<ItemToken> seen;
  out.reserve(count);
  while (out.size() < count) {
    ItemToken t;
    rng.fill(t);
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

struct AliceOptions {
  FixedPointCodec codec = FixedPointCodec();
  // Fixed mask instead of a random one; for tests.
  std::optional<BigInt> mask;
  // Items entering the protocol; all items when unset.
  std::optional<std::vector<ItemId>> items;
};

inline std::vector<ItemId> protocol_items(const RankMatrix& ranks,
                                          const AliceOptions& options) {
  if (!options.items) {
    std::vector<ItemId> all(ranks.items());
    std::iota(all.begin(), all.end(), ItemId{0});
    return all;
  }
  std::set<ItemId> seen;
  for (ItemId i : *options.items) {
    if (i >= ranks.items()) throw DataError("item subset entry out of range");
    if (!seen.insert(i).second) throw DataError("item subset has duplicates");
  }
  return *options.items;
}

inline void check_budget(const crypto::PublicKey& pk, const RankMatrix& ranks,
                         const FixedPointCodec& codec) {
  if (!crypto::fits_plaintext_budget(pk.n(), ranks.users(), ranks.rank_max(), codec,
                                     mask_bound())) {
    throw ConfigError(
        "plaintext range overflow: n_users * rank_max * scale + mask bound >= N");
  }
}

inline MaskedDegreeBatch alice_compute_degrees(const ScoresMessage& batch,
                                               const RankMatrix& ranks, UserId target,
                                               const AliceOptions& options,
                                               RandomSource& token_rng,
                                               RandomSource& crypto_rng) {
  const crypto::PublicKey& pk = batch.public_key;
  check_budget(pk, ranks, options.codec);
  if (batch.scores.empty()) throw ProtocolError("no neighbors: empty similarity batch");
  std::set<UserId> seen;
  for (const auto& [user, c] : batch.scores) {
    if (user >= ranks.users()) {
      throw ProtocolError("similarity for unknown user " + std::to_string(user));
    }
    if (!seen.insert(user).second) throw ProtocolError("duplicate user in score batch");
    pk.check(c);
  }

  std::vector<ItemId> items = protocol_items(ranks, options);
  std::vector<ItemToken> tokens = assign_tokens(items.size(), token_rng);

  MaskedDegreeBatch out;
  if (options.mask) {
    if (*options.mask < 0 || *options.mask >= mask_bound()) {
      throw ConfigError("mask outside [0, 2^64)");
    }
    out.mask = *options.mask;
  } else {
    out.mask = BigInt(static_cast<unsigned long>(crypto_rng.next_u64()));
  }

  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[token_rng.uniform(i)]);
  }

  out.message.degrees.reserve(items.size());
  for (std::size_t idx : order) {
    ItemId item = items[idx];
    crypto::Ciphertext acc = pk.zero();
    for (const auto& [user, c] : batch.scores) {
      if (user == target) continue;
      unsigned rank = ranks.at(user, item);
      if (rank == 0) continue;
      acc = pk.add(acc, rank == 1 ? c : pk.scale(c, BigInt(rank)));
    }
    acc = pk.add(acc, pk.encrypt(out.mask, crypto_rng));
    out.message.degrees.emplace_back(tokens[idx], std::move(acc));
    out.token_map.emplace(tokens[idx], item);
  }
  return out;
}

// ---- Bob: ranking ---------------------------------------------------------

struct BobRanking {
  TokenOrder order;
  // At least two items and every decrypted degree equal.
  bool degenerate = false;
};

inline BobRanking bob_rank(const MaskedDegreesMessage& batch, const Keypair& keys) {
  std::vector<std::pair<BigInt, ItemToken>> scored;
  scored.reserve(batch.degrees.size());
  std::set<ItemToken> seen;
  for (const auto& [tok, c] : batch.degrees) {
    if (!seen.insert(tok).second) throw ProtocolError("duplicate item token");
    scored.emplace_back(keys.decrypt(c), tok);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  BobRanking out;
  for (auto& s : scored) out.order.push_back(s.second);
  out.degenerate = scored.size() >= 2 && scored.front().first == scored.back().first;
  return out;
}

// ---- Alice: resolution and merging ----------------------------------------

inline CandidateList alice_resolve(const TokenOrder& order, const TokenMap& map) {
  CandidateList out;
  out.provenance = Provenance::kSocialized;
  std::set<ItemToken> seen;
  for (const ItemToken& t : order) {
    auto it = map.find(t);
    if (it == map.end()) throw ProtocolError("protocol violation: unknown item token");
    if (!seen.insert(t).second) throw ProtocolError("protocol violation: repeated token");
    out.items.push_back(it->second);
  }
  return out;
}

// Round-robin starting with the socialized list. On its turn a list emits its
// next item not already taken, skipping duplicates; stops at top_k.
inline CandidateList merge_lists(const CandidateList& socialized,
                                 const CandidateList& clustering, int top_k) {
  if (top_k <= 0) throw ConfigError("top_k must be positive");
  CandidateList out;
  out.provenance = Provenance::kMerged;
  std::set<ItemId> taken;
  std::size_t pos[2] = {0, 0};
  const std::vector<ItemId>* lists[2] = {&socialized.items, &clustering.items};
  const auto k = static_cast<std::size_t>(top_k);
  int turn = 0;
  while (out.items.size() < k &&
         (pos[0] < lists[0]->size() || pos[1] < lists[1]->size())) {
    const auto& l = *lists[turn];
    std::size_t& p = pos[turn];
    while (p < l.size() && taken.contains(l[p])) ++p;
    if (p < l.size()) {
      taken.insert(l[p]);
      out.items.push_back(l[p]);
      ++p;
    }
    turn ^= 1;
  }
  return out;
}

// ---- Plaintext route --------------------------------------------------------

// Degree(u, k) = sum_{j != u} encode(Sim(u, j)) * Rank[j][k], as integers.
inline std::vector<std::uint64_t> plaintext_degrees(const SimilarityTable& table,
                                                    const RankMatrix& ranks, UserId target,
                                                    const FixedPointCodec& codec,
                                                    std::span<const ItemId> items) {
  std::vector<std::uint64_t> out(items.size(), 0);
  for (const auto& [user, sim] : table) {
    if (user == target) continue;
    std::uint64_t s = codec.encode(sim);
    for (std::size_t k = 0; k < items.size(); ++k) {
      out[k] += s * ranks.at(user, items[k]);
    }
  }
  return out;
}

// The list run_protocol would return, computed in the clear with the same
// token draws (and so the same tie order) as an Alice using token_rng.
inline CandidateList plaintext_socialized_list(const SimilarityTable& table,
                                               const RankMatrix& ranks, UserId target,
                                               const AliceOptions& options,
                                               RandomSource& token_rng,
                                               bool* degenerate = nullptr) {
  std::vector<ItemId> items = protocol_items(ranks, options);
  std::vector<ItemToken> tokens = assign_tokens(items.size(), token_rng);
  std::vector<std::uint64_t> deg = plaintext_degrees(table, ranks, target, options.codec, items);
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (deg[a] != deg[b]) return deg[a] > deg[b];
    return tokens[a] < tokens[b];
  });
  CandidateList out;
  for (std::size_t i : idx) out.items.push_back(items[i]);
  if (degenerate) {
    *degenerate = items.size() >= 2 &&
                  std::all_of(deg.begin(), deg.end(), [&](auto d) { return d == deg[0]; });
  }
  return out;
}

// ---- Transcript -------------------------------------------------------------

enum class Party { kAlice, kBob };
enum class Direction { kSent, kReceived };

struct TranscriptEntry {
  Party party;
  Direction direction;
  MessageType type;
  std::uint64_t digest;
  std::vector<std::uint8_t> payload;
};

class ProtocolTranscript {
 public:
  ProtocolTranscript() = default;
  ProtocolTranscript(const ProtocolTranscript& o) {
    std::lock_guard<std::mutex> lock(o.mu_);
    entries_ = o.entries_;
    notes_ = o.notes_;
  }
  ProtocolTranscript& operator=(const ProtocolTranscript& o) {
    if (this != &o) {
      std::scoped_lock lock(mu_, o.mu_);
      entries_ = o.entries_;
      notes_ = o.notes_;
    }
    return *this;
  }

  void record(Party party, Direction dir, const Frame& f) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_.push_back({party, dir, f.type, crypto::fnv1a64(f.payload), f.payload});
  }
  void note(std::string text) {
    std::lock_guard<std::mutex> lock(mu_);
    notes_.push_back(std::move(text));
  }

  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  const std::vector<std::string>& notes() const { return notes_; }
  bool has_note(const std::string& text) const {
    return std::find(notes_.begin(), notes_.end(), text) != notes_.end();
  }

 private:
  mutable std::mutex mu_;
  std::vector<TranscriptEntry> entries_;
  std::vector<std::string> notes_;
};

inline constexpr const char* kDegenerateNote = "degenerate";

// Structural privacy check of a completed session. Returns the violations
// found; empty means the transcript is schema-valid.
//
//   - exactly: Bob sends scores, Alice receives them, Alice sends masked
//     degrees, Bob receives them, Bob sends the token order, Alice receives it
//   - every payload parses completely under its message schema
//   - every ciphertext Alice or Bob receives lies in [N, N^2), which rules
//     out a small plaintext (score, degree or rank) travelling in the clear
//   - tokens Bob receives are distinct and none is a zero-padded integer
//     (a raw item id); the order Alice receives is a permutation of them
inline std::vector<std::string> validate_transcript(const ProtocolTranscript& t) {
  std::vector<std::string> v;
  const auto& e = t.entries();
  const std::pair<Party, Direction> expected[6] = {
      {Party::kBob, Direction::kSent},     {Party::kAlice, Direction::kReceived},
      {Party::kAlice, Direction::kSent},   {Party::kBob, Direction::kReceived},
      {Party::kBob, Direction::kSent},     {Party::kAlice, Direction::kReceived}};
  const MessageType types[6] = {MessageType::kScores,        MessageType::kScores,
                                MessageType::kMaskedDegrees, MessageType::kMaskedDegrees,
                                MessageType::kTokenOrder,    MessageType::kTokenOrder};
  if (e.size() != 6) {
    v.push_back("expected 6 transcript entries, found " + std::to_string(e.size()));
    return v;
  }
  for (std::size_t i = 0; i < 6; ++i) {
    if (e[i].party != expected[i].first || e[i].direction != expected[i].second ||
        e[i].type != types[i]) {
      v.push_back("entry " + std::to_string(i) + " has unexpected party, direction or type");
    }
    if (e[i].digest != crypto::fnv1a64(e[i].payload)) {
      v.push_back("entry " + std::to_string(i) + " digest mismatch");
    }
  }
  for (std::size_t i = 0; i < 6; i += 2) {
    if (e[i].digest != e[i + 1].digest || e[i].payload != e[i + 1].payload) {
      v.push_back("message " + std::to_string(i / 2 + 1) + " altered in transit");
    }
  }
  if (!v.empty()) return v;

  try {
    ScoresMessage scores = decode_scores(Frame{e[1].type, e[1].payload});
    const BigInt& n = scores.public_key.n();
    for (const auto& [user, c] : scores.scores) {
      if (c.value < n) v.push_back("Alice received a score below N (plaintext?)");
    }
    MaskedDegreesMessage degrees =
        decode_masked_degrees(Frame{e[3].type, e[3].payload}, scores.public_key);
    std::set<ItemToken> tokens;
    for (const auto& [tok, c] : degrees.degrees) {
      if (c.value < n) v.push_back("Bob received a degree below N (plaintext?)");
      if (std::all_of(tok.begin(), tok.begin() + 12, [](std::uint8_t b) { return b == 0; })) {
        v.push_back("Bob received a token shaped like a raw item id");
      }
      if (!tokens.insert(tok).second) v.push_back("Bob received duplicate tokens");
    }
    TokenOrderMessage order = decode_token_order(Frame{e[5].type, e[5].payload});
    std::set<ItemToken> returned(order.tokens.begin(), order.tokens.end());
    if (returned != tokens || order.tokens.size() != tokens.size()) {
      v.push_back("token order is not a permutation of the masked-degree tokens");
    }
  } catch (const ProtocolError& err) {
    v.push_back(std::string("schema violation: ") + err.what());
  }
  return v;
}

// ---- Parties ------------------------------------------------------------------

class BobParty {
 public:
  using SimilarityProvider = std::function<SimilarityTable(UserId)>;

  BobParty(Keypair keys, SimilarityProvider provider, FixedPointCodec codec = FixedPointCodec(),
           std::shared_ptr<RandomSource> rng = std::make_shared<SystemRandom>())
      : keys_(std::move(keys)), provider_(std::move(provider)), codec_(codec),
        rng_(std::move(rng)) {}

  const Keypair& keys() const { return keys_; }

  Frame start(UserId target) {
    if (state_ != State::kIdle) throw ProtocolError("out-of-order: session already started");
    Frame f = encode(bob_send_similarities(target, provider_(target), keys_, codec_, *rng_));
    state_ = State::kAwaitDegrees;
    return f;
  }

  Frame on_masked_degrees(const Frame& f) {
    if (state_ != State::kAwaitDegrees) {
      throw ProtocolError("out-of-order message: masked degrees not expected");
    }
    MaskedDegreesMessage m = decode_masked_degrees(f, keys_.public_key());
    BobRanking r = bob_rank(m, keys_);
    degenerate_ = r.degenerate;
    state_ = State::kDone;
    return encode(TokenOrderMessage{std::move(r.order)});
  }

  bool degenerate() const { return degenerate_; }
  void reset() {
    state_ = State::kIdle;
    degenerate_ = false;
  }

 private:
  enum class State { kIdle, kAwaitDegrees, kDone };

  Keypair keys_;
  SimilarityProvider provider_;
  FixedPointCodec codec_;
  std::shared_ptr<RandomSource> rng_;
  State state_ = State::kIdle;
  bool degenerate_ = false;
};

class AliceParty {
 public:
  explicit AliceParty(RankMatrix ranks, AliceOptions options = AliceOptions(),
                      std::shared_ptr<RandomSource> token_rng = std::make_shared<SystemRandom>(),
                      std::shared_ptr<RandomSource> crypto_rng = std::make_shared<SystemRandom>())
      : ranks_(std::move(ranks)), options_(std::move(options)),
        token_rng_(std::move(token_rng)), crypto_rng_(std::move(crypto_rng)) {}

  const RankMatrix& ranks() const { return ranks_; }
  AliceOptions& options() { return options_; }

  void begin(UserId target) {
    if (state_ != State::kIdle) throw ProtocolError("out-of-order: session already started");
    if (target >= ranks_.users()) throw DataError("unknown target user");
    target_ = target;
    state_ = State::kAwaitScores;
  }

  Frame on_scores(const Frame& f) {
    if (state_ != State::kAwaitScores) {
      throw ProtocolError("out-of-order message: scores not expected");
    }
    ScoresMessage m = decode_scores(f);
    if (m.target != target_) throw ProtocolError("scores are for a different target");
    MaskedDegreeBatch batch =
        alice_compute_degrees(m, ranks_, target_, options_, *token_rng_, *crypto_rng_);
    token_map_ = std::move(batch.token_map);
    mask_ = batch.mask;
    state_ = State::kAwaitOrder;
    return encode(batch.message);
  }

  CandidateList on_token_order(const Frame& f) {
    if (state_ != State::kAwaitOrder) {
      throw ProtocolError("out-of-order message: token order not expected");
    }
    TokenOrderMessage m = decode_token_order(f);
    if (m.tokens.size() != token_map_.size()) {
      throw ProtocolError("protocol violation: token order has wrong length");
    }
    CandidateList out = alice_resolve(m.tokens, token_map_);
    last_order_ = std::move(m.tokens);
    state_ = State::kDone;
    return out;
  }

  const TokenMap& token_map() const { return token_map_; }
  const TokenOrder& token_order() const { return last_order_; }
  const BigInt& mask() const { return mask_; }

  void reset() {
    state_ = State::kIdle;
    token_map_.clear();
    last_order_.clear();
  }

 private:
  enum class State { kIdle, kAwaitScores, kAwaitOrder, kDone };

  RankMatrix ranks_;
  AliceOptions options_;
  std::shared_ptr<RandomSource> token_rng_;
  std::shared_ptr<RandomSource> crypto_rng_;
  State state_ = State::kIdle;
  UserId target_ = 0;
  TokenMap token_map_;
  TokenOrder last_order_;
  BigInt mask_;
};

namespace detail {

class RecordingEndpoint {
 public:
  RecordingEndpoint(Endpoint& inner, Party party, ProtocolTranscript& log)
      : inner_(inner), party_(party), log_(log) {}

  void send(const Frame& f) {
    log_.record(party_, Direction::kSent, f);
    inner_.send(f);
  }
  Frame receive() {
    Frame f = inner_.receive();
    log_.record(party_, Direction::kReceived, f);
    return f;
  }

 private:
  Endpoint& inner_;
  Party party_;
  ProtocolTranscript& log_;
};

}  // namespace detail

struct ProtocolResult {
  CandidateList list;
  TokenOrder token_order;
  ProtocolTranscript transcript;
  bool degenerate = false;
};

// Runs one session: Bob on a worker thread, Alice on the caller's. Either
// side's failure closes the channel and is rethrown here.
inline ProtocolResult run_protocol(AliceParty& alice, BobParty& bob, UserId target,
                                   Channel& channel) {
  ProtocolResult result;
  detail::RecordingEndpoint a(*channel.alice, Party::kAlice, result.transcript);
  detail::RecordingEndpoint b(*channel.bob, Party::kBob, result.transcript);
  alice.begin(target);

  std::exception_ptr bob_error;
  std::thread bob_thread([&] {
    try {
      b.send(bob.start(target));
      Frame degrees = b.receive();
      b.send(bob.on_masked_degrees(degrees));
      if (bob.degenerate()) result.transcript.note(kDegenerateNote);
    } catch (...) {
      bob_error = std::current_exception();
      channel.close();
    }
  });

  std::exception_ptr alice_error;
  try {
    Frame scores = a.receive();
    a.send(alice.on_scores(scores));
    Frame order = a.receive();
    result.list = alice.on_token_order(order);
    result.token_order = alice.token_order();
  } catch (...) {
    alice_error = std::current_exception();
    channel.close();
  }
  bob_thread.join();

  if (bob_error && alice_error) {
    // A closed-channel error on one side is a consequence of the other's.
    try {
      std::rethrow_exception(alice_error);
    } catch (const ChannelClosed&) {
      std::rethrow_exception(bob_error);
    } catch (...) {
      throw;
    }
  }
  if (alice_error) std::rethrow_exception(alice_error);
  if (bob_error) std::rethrow_exception(bob_error);
  result.degenerate = bob.degenerate();
  return result;
}

}  // namespace ppsr::protocol
