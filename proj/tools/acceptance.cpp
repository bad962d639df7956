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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ppsr/ppsr.hpp"

namespace {

using namespace ppsr;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

nmf::Matrix random_non_negative(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  nmf::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = unif(rng);
  return m;
}

const crypto::Keypair& test_keys() {
  static const crypto::Keypair keys = [] {
    SeededRandom rng(2026);
    return crypto::keygen(crypto::kTestKeyBits, rng);
  }();
  return keys;
}

// ---- clustering ----------------------------------------------------------------

Outcome nmf_monotone() {
  double worst = 0;
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    nmf::Matrix v = random_non_negative(rng, 50, 40);
    nmf::MultiViewConfig c;
    c.seed = seed;
    c.max_iters = 300;
    c.rel_tol = 1e-300;
    auto t0 = Clock::now();
    auto model = nmf::nmf_factorize({v, 0}, 5, c);
    worst = std::max(worst, seconds_since(t0));
    if (model.iterations != 300) ++violations;
    for (std::size_t t = 1; t < model.objective_trace.size(); ++t) {
      if (model.objective_trace[t] > model.objective_trace[t - 1] * (1.0 + 1e-9)) ++violations;
    }
  }
  return {violations == 0 && worst < 5.0,
          fmt("50 instances, %d violations, slowest %.3fs", violations, worst)};
}

Outcome exact_rank_recovery() {
  int ok = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    nmf::Matrix v = random_non_negative(rng, 20, 3) * random_non_negative(rng, 3, 15);
    nmf::MultiViewConfig c;
    c.seed = seed;
    c.max_iters = 20000;
    c.rel_tol = 1e-14;
    auto model = nmf::nmf_factorize({v, 0}, 3, c);
    double rel = model.objective_trace.back() / v.squaredNorm();
    worst = std::max(worst, rel);
    ok += rel < 1e-6;
  }
  return {ok == 10, fmt("%d/10 seeds, worst relative objective %.2e", ok, worst)};
}

Outcome degeneration() {
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    nmf::Matrix v = random_non_negative(rng, 30, 12) * 4.0;
    nmf::MultiViewConfig c = nmf::MultiViewConfig::defaults(1, 4);
    c.lambda_pair.setZero();
    c.seed = seed;
    std::vector<nmf::ViewMatrix> views{{v, 0}};
    auto multi = nmf::multiview_factorize(views, c);
    auto single = nmf::nmf_factorize({nmf::normalize_view(v), 0}, 4, c);
    ok += multi.W[0] == single.W[0] && multi.H[0] == single.H[0] &&
          multi.objective_trace == single.objective_trace &&
          multi.assignment == single.assignment;
  }
  return {ok == 5, fmt("%d/5 seeds bit-identical", ok)};
}

eval::ExperimentConfig synthetic_config(double lambda_pair) {
  eval::ExperimentConfig c;
  c.synthetic.n_items = 150;
  c.synthetic.k_true = 3;
  c.synthetic.n_views = 2;
  c.synthetic.noise = {0.3};
  c.K = 3;
  c.lambda_pair = lambda_pair;
  return c;
}

struct ClusterMedians {
  double multi_acc = 0, multi_nmi = 0, best_acc = 0, best_nmi = 0;
  std::string best_acc_name, best_nmi_name;
};

ClusterMedians cluster_medians(const eval::ExperimentConfig& c) {
  std::map<std::string, std::vector<double>> acc, nmi;
  for (std::uint64_t seed : c.seeds) {
    auto ds = eval::load_dataset(c, seed);
    for (const auto& [name, s] : eval::clustering_scores(ds, c, seed)) {
      acc[name].push_back(s.accuracy);
      nmi[name].push_back(s.nmi);
    }
  }
  ClusterMedians m;
  m.multi_acc = eval::summarize(acc["multiview"]).median;
  m.multi_nmi = eval::summarize(nmi["multiview"]).median;
  for (const auto& [name, v] : acc) {
    if (name == "multiview") continue;
    double a = eval::summarize(v).median, n = eval::summarize(nmi[name]).median;
    if (a > m.best_acc) m.best_acc = a, m.best_acc_name = name;
    if (n > m.best_nmi) m.best_nmi = n, m.best_nmi_name = name;
  }
  return m;
}

Outcome multiview_advantage() {
  auto t0 = Clock::now();
  ClusterMedians m = cluster_medians(synthetic_config(1.0));
  double secs = seconds_since(t0);
  ClusterMedians d = cluster_medians(synthetic_config(0.1));
  std::printf("  info: lambda_pair=0.1 gives multiview acc=%.3f nmi=%.3f vs best single-view "
              "acc=%.3f nmi=%.3f\n",
              d.multi_acc, d.multi_nmi, d.best_acc, d.best_nmi);
  return {m.multi_acc >= m.best_acc && m.multi_nmi >= m.best_nmi && secs < 60.0,
          fmt("lambda_pair=1: multiview acc=%.3f nmi=%.3f; best single-view acc=%.3f (%s) "
              "nmi=%.3f (%s); %.1fs",
              m.multi_acc, m.multi_nmi, m.best_acc, m.best_acc_name.c_str(), m.best_nmi,
              m.best_nmi_name.c_str(), secs)};
}

// ---- paillier ------------------------------------------------------------------

Outcome paillier_correctness() {
  const auto& keys = test_keys();
  const auto& pk = keys.public_key();
  const crypto::BigInt& n = pk.n();
  SeededRandom rng(5);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    crypto::BigInt m = crypto::random_below(rng, n);
    bad += keys.decrypt(pk.encrypt(m, rng)) != m;
  }
  for (int i = 0; i < 100; ++i) {
    crypto::BigInt a = crypto::random_below(rng, n), b = crypto::random_below(rng, n);
    crypto::BigInt sum = (a + b) % n, prod = (a * b) % n;
    bad += keys.decrypt(pk.add(pk.encrypt(a, rng), pk.encrypt(b, rng))) != sum;
    bad += keys.decrypt(pk.scale(pk.encrypt(a, rng), b)) != prod;
  }
  for (int i = 0; i < 50; ++i) {
    auto c = pk.zero();
    crypto::BigInt expect = 0;
    const int len = 1 + i % 20;
    for (int j = 0; j < len; ++j) {
      crypto::BigInt a = crypto::random_below(rng, n), b = crypto::random_below(rng, n);
      c = pk.add(c, pk.scale(pk.encrypt(a, rng), b));
      expect = (expect + a * b) % n;
    }
    bad += keys.decrypt(c) != expect;
  }
  return {bad == 0, fmt("1000 roundtrips, 100 sums, 100 products, 50 chains; %d mismatches", bad)};
}

// ---- protocol ------------------------------------------------------------------

struct Instance {
  social::SimilarityTable sims;
  protocol::RankMatrix ranks;
  protocol::UserId target = 0;
};

Instance random_instance(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> users(3, 20), items(2, 30), rank(0, 5), grid(0, 8);
  Instance inst;
  const int n_u = users(gen), m = items(gen);
  inst.ranks = protocol::RankMatrix(n_u, m);
  inst.target = static_cast<protocol::UserId>(gen() % n_u);
  for (int u = 0; u < n_u; ++u) {
    if (static_cast<protocol::UserId>(u) != inst.target) inst.sims[u] = grid(gen) / 8.0;
    for (int k = 0; k < m; ++k) inst.ranks.set(u, k, gen() % 3 == 0 ? rank(gen) : 0);
  }
  for (int k = 1; k < m; k += 4) {
    for (int u = 0; u < n_u; ++u) inst.ranks.set(u, k, inst.ranks.at(u, k - 1));
  }
  return inst;
}

struct Session {
  protocol::ProtocolResult result;
  protocol::TokenMap token_map;
};

Session run_session(const Instance& inst, protocol::Channel channel, std::uint64_t seed,
                    std::optional<crypto::BigInt> mask = std::nullopt) {
  protocol::AliceOptions opts;
  opts.mask = mask;
  protocol::AliceParty alice(inst.ranks, opts, std::make_shared<SeededRandom>(seed),
                             std::make_shared<SeededRandom>(seed + 1));
  protocol::BobParty bob(test_keys(), [&](protocol::UserId) { return inst.sims; },
                         crypto::FixedPointCodec(), std::make_shared<SeededRandom>(seed + 2));
  Session s;
  s.result = protocol::run_protocol(alice, bob, inst.target, channel);
  s.token_map = alice.token_map();
  return s;
}

// Plaintext degrees from the raw instance, ordered by the same tie rule.
std::vector<protocol::ItemId> oracle_order(const Instance& inst, const protocol::TokenMap& map) {
  std::map<protocol::ItemId, protocol::ItemToken> token_of;
  for (const auto& [t, item] : map) token_of[item] = t;
  std::vector<long long> degree(inst.ranks.items(), 0);
  for (const auto& [user, sim] : inst.sims) {
    if (user == inst.target) continue;
    long long s = std::llround(sim * 1e6);
    for (std::size_t k = 0; k < inst.ranks.items(); ++k) degree[k] += s * inst.ranks.at(user, k);
  }
  std::vector<protocol::ItemId> order(inst.ranks.items());
  std::iota(order.begin(), order.end(), protocol::ItemId{0});
  std::sort(order.begin(), order.end(), [&](protocol::ItemId a, protocol::ItemId b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    return token_of.at(a) < token_of.at(b);
  });
  return order;
}

Outcome protocol_oracle() {
  auto t0 = Clock::now();
  int mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Instance inst = random_instance(seed);
    Session s = run_session(inst, protocol::make_in_process_channel(), seed * 7);
    mismatches += s.result.list.items != oracle_order(inst, s.token_map);
  }
  double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 120.0,
          fmt("50 instances, %d mismatches, %.1fs", mismatches, secs)};
}

Outcome mask_invariance() {
  int differ = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = random_instance(100 + seed);
    auto a = run_session(inst, protocol::make_in_process_channel(), seed, crypto::BigInt(0));
    auto b = run_session(inst, protocol::make_in_process_channel(), seed,
                         crypto::BigInt("18446744073709551615"));
    differ += !(a.result.list == b.result.list);
  }
  return {differ == 0, fmt("10 instances, masks 0 and 2^64-1, %d differing lists", differ)};
}

Outcome transport_independence() {
  int differ = 0, invalid = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = random_instance(200 + seed);
    auto in = run_session(inst, protocol::make_in_process_channel(), seed);
    auto so = run_session(inst, protocol::make_loopback_socket_channel(), seed);
    differ += !(in.result.list == so.result.list) ||
              in.result.token_order != so.result.token_order;
    invalid += !protocol::validate_transcript(in.result.transcript).empty();
    invalid += !protocol::validate_transcript(so.result.transcript).empty();
  }
  return {differ == 0 && invalid == 0,
          fmt("10 instances, %d differing lists, %d invalid transcripts", differ, invalid)};
}

// ---- similarity ----------------------------------------------------------------

social::SparseVector dense(std::initializer_list<double> values) {
  social::SparseVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) {
    if (x != 0.0) v.insert(k) = x;
    ++k;
  }
  return v;
}

social::UserProfile blank(social::UserId id, std::size_t n) {
  social::UserProfile p;
  p.user_id = id;
  p.publication = social::SparseVector(3);
  p.follows.assign(n, 0);
  p.friends.assign(n, 0);
  p.likes.assign(n, 0);
  p.comments.assign(n, 0);
  p.reposts.assign(n, 0);
  return p;
}

Outcome similarity_examples() {
  using namespace social;
  double pub = publication_similarity(dense({1, 2, 0}), dense({2, 1, 0}));

  UserProfile a = blank(0, 6), b = blank(1, 6);
  for (int k : {2, 3, 4, 5}) a.follows[k] = 1;
  for (int k : {2, 3}) b.follows[k] = 1;
  double conn = connection_similarity(a, b, SimilarityWeights(1, 1, 1, 0.5, 0.5, 1, 1, 1));

  UserProfile c = blank(0, 2), d = blank(1, 2);
  c.likes = {4, 2};
  c.comments = {2, 1};
  double inter = interaction_similarity(c, d, SimilarityWeights(1, 1, 1, 1, 1, 0.5, 0.3, 0.2));

  a.publication = dense({1, 2, 0});
  b.publication = dense({2, 1, 0});
  a.likes[0] = 4, a.likes[1] = 2;
  a.comments[0] = 2, a.comments[1] = 1;
  double unified = unified_similarity(a, b, SimilarityWeights(1, 1, 1, 0.5, 0.5, 0.5, 0.3, 0.2));

  bool ok = std::abs(pub - 0.8) < 1e-4 && std::abs(conn - 0.3536) < 1e-4 &&
            std::abs(inter - 0.4) < 1e-4 && std::abs(unified - 0.5179) < 1e-4;
  return {ok, fmt("publication %.4f, connection %.4f, interaction %.4f, unified %.4f", pub,
                  conn, inter, unified)};
}

// ---- metrics -------------------------------------------------------------------

Outcome metric_sanity() {
  using eval::Labels;
  int bad = 0;
  auto near = [&](double x, double y) { bad += std::abs(x - y) > 1e-12; };
  Labels truth = {0, 0, 1, 1, 2, 2, 2};
  Labels moved = {2, 2, 0, 0, 1, 1, 1};
  for (const Labels& p : {truth, moved}) {
    near(eval::clustering_accuracy(p, truth), 1.0);
    near(eval::pairwise_f1(p, truth), 1.0);
    near(eval::nmi(p, truth), 1.0);
  }
  near(eval::clustering_accuracy({0, 0, 1, 1}, {1, 1, 1, 0}), 0.75);
  near(eval::pairwise_f1({0, 0, 1, 1}, {0, 1, 1, 1}), 0.4);
  near(eval::nmi({0, 0, 1, 1}, {0, 1, 0, 1}), 0.0);

  std::mt19937 gen(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 30;
    const int k = 1 + gen() % 5;
    Labels p(n), t(n);
    for (auto& v : p) v = static_cast<int>(gen() % k);
    for (auto& v : t) v = static_cast<int>(gen() % k);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    Labels q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = perm[p[i]];
    auto s = eval::score_clustering(p, t), r = eval::score_clustering(q, t);
    for (double v : {s.accuracy, s.f1, s.nmi}) bad += v < 0.0 || v > 1.0;
    near(s.accuracy, r.accuracy);
    near(s.f1, r.f1);
    near(s.nmi, r.nmi);
  }
  return {bad == 0, fmt("identity, relabeling, hand cases and 1000 random trials; %d failures", bad)};
}

// ---- recommendation ------------------------------------------------------------

std::map<std::string, double> median_p5(double social_signal) {
  eval::ExperimentConfig c = synthetic_config(1.0);
  c.synthetic.social_signal = social_signal;
  std::map<std::string, std::vector<double>> p5;
  for (std::uint64_t seed : c.seeds) {
    auto ds = eval::load_dataset(c, seed);
    auto profiles = social::build_profiles(ds.social, c.min_df);
    auto out = eval::evaluate_recommenders(ds, profiles, c.recommend_settings(ds.views.size()), seed);
    for (const char* m : eval::kModels) p5[m].push_back(eval::precision_at(out.curves[m], 5));
  }
  std::map<std::string, double> med;
  for (auto& [m, v] : p5) med[m] = eval::summarize(v).median;
  return med;
}

Outcome socialized_benefit() {
  auto s = median_p5(1.0);
  auto z = median_p5(0.0);
  bool ok = s["PPSR"] >= s["RM-MV"] && s["RM-SVS"] >= s["RM-SV"] &&
            std::abs(z["PPSR"] - z["RM-MV"]) < 0.05;
  return {ok, fmt("signal: PPSR=%.3f RM-MV=%.3f RM-SVS=%.3f RM-SV=%.3f; signal-free: PPSR=%.3f "
                  "RM-MV=%.3f",
                  s["PPSR"], s["RM-MV"], s["RM-SVS"], s["RM-SV"], z["PPSR"], z["RM-MV"])};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"NMF monotonicity", nmf_monotone},
      {"exact-rank recovery", exact_rank_recovery},
      {"multi-view degeneration", degeneration},
      {"multi-view advantage", multiview_advantage},
      {"Paillier correctness", paillier_correctness},
      {"protocol-oracle equivalence", protocol_oracle},
      {"mask invariance", mask_invariance},
      {"transport independence", transport_independence},
      {"similarity formulas", similarity_examples},
      {"metric sanity", metric_sanity},
      {"socialized-recommendation benefit", socialized_benefit},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
