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

#include "ppsr/social/similarity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ppsr/social/profiles.hpp"
#include "ppsr/social/sentiment.hpp"
#include "ppsr/social/text.hpp"

namespace ppsr::social {
namespace {

SparseVector Dense(std::initializer_list<double> values) {
  SparseVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) {
    if (x != 0.0) v.insert(k) = x;
    ++k;
  }
  return v;
}

UserProfile Blank(UserId id, std::size_t n) {
  UserProfile p;
  p.user_id = id;
  p.publication = SparseVector(3);
  p.follows.assign(n, 0);
  p.friends.assign(n, 0);
  p.likes.assign(n, 0);
  p.comments.assign(n, 0);
  p.reposts.assign(n, 0);
  return p;
}

TEST(Text, TokenizesLowercaseAlphanumerics) {
  EXPECT_EQ(tokenize("Hello, World! jazz-rock 42"),
            (std::vector<std::string>{"hello", "world", "jazz", "rock", "42"}));
  EXPECT_TRUE(tokenize("  ,;! ").empty());
}

TEST(Text, StopWordsOnlyGiveZeroVector) {
  std::vector<std::vector<std::string>> docs{{"jazz", "rock"}, {"jazz"}};
  Corpus corpus = Corpus::build(docs, 1);
  std::vector<std::string> user{"the", "a", "an", "of"};
  EXPECT_EQ(build_publication_vector(user, corpus).nonZeros(), 0);
}

TEST(Text, TfIdfHandComputed) {
  std::vector<std::vector<std::string>> docs{{"jazz", "jazz", "rock"}, {"rock"}};
  Corpus corpus = Corpus::build(docs, 1);
  ASSERT_EQ(corpus.vocabulary(), (std::vector<std::string>{"jazz", "rock"}));
  SparseVector a = build_publication_vector(docs[0], corpus);
  EXPECT_NEAR(a.coeff(corpus.find("jazz")), 2.0 * std::log(2.0), 1e-12);
  EXPECT_EQ(a.coeff(corpus.find("rock")), 0.0);
  EXPECT_TRUE(build_publication_vector(docs[1], corpus).nonZeros() == 0);
}

TEST(Text, IdenticalTokensGiveIdenticalVectors) {
  std::vector<std::vector<std::string>> docs{{"blues", "folk"}, {"blues", "folk"}, {"metal"}};
  Corpus corpus = Corpus::build(docs, 1);
  SparseVector a = build_publication_vector(docs[0], corpus);
  SparseVector b = build_publication_vector(docs[1], corpus);
  EXPECT_TRUE(a.isApprox(b));
  EXPECT_NEAR(publication_similarity(a, b), 1.0, 1e-12);
}

TEST(Text, MinDfFiltersVocabularyAndEmptyCorpusFails) {
  std::vector<std::vector<std::string>> docs{{"jazz", "the"}, {"rock"}};
  Corpus corpus = Corpus::build(docs, 2);
  EXPECT_EQ(corpus.size(), 0u);
  EXPECT_THROW(build_publication_vector(docs[0], corpus), DataError);
}

TEST(PublicationSimilarity, Cosines) {
  SparseVector p = Dense({1, 2, 0}), q = Dense({2, 1, 0});
  EXPECT_NEAR(publication_similarity(p, q), 0.8, 1e-12);
  EXPECT_NEAR(publication_similarity(p, p), 1.0, 1e-12);
  EXPECT_EQ(publication_similarity(Dense({1, 0, 0}), Dense({0, 0, 3})), 0.0);
  EXPECT_EQ(publication_similarity(Dense({0, 0, 0}), q), 0.0);
  EXPECT_THROW(publication_similarity(p, Dense({1, 1})), DataError);
}

TEST(ConnectionSimilarity, HandDerivedCases) {
  SimilarityWeights w(1, 1, 1, 0.5, 0.5, 1, 1, 1);
  // Users 0 and 1 each follow {2, 3, 4, 5} vs {2, 3}.
  UserProfile a = Blank(0, 6), b = Blank(1, 6);
  for (int k : {2, 3, 4, 5}) a.follows[k] = 1;
  for (int k : {2, 3}) b.follows[k] = 1;
  EXPECT_NEAR(connection_similarity(a, b, w), 0.5 * 2.0 / std::sqrt(8.0), 1e-12);
  EXPECT_NEAR(connection_similarity(a, b, w), 0.3536, 1e-4);

  UserProfile c = Blank(0, 4), d = Blank(1, 4);
  for (UserProfile* p : {&c, &d}) {
    p->follows[2] = p->follows[3] = 1;
    p->friends[2] = p->friends[3] = 1;
  }
  EXPECT_NEAR(connection_similarity(c, d, w), 1.0, 1e-12);

  UserProfile e = Blank(0, 4), f = Blank(1, 4);
  e.follows[2] = 1;
  f.follows[3] = 1;
  EXPECT_EQ(connection_similarity(e, f, w), 0.0);
}

TEST(InteractionSimilarity, HandDerivedCases) {
  SimilarityWeights w(1, 1, 1, 1, 1, 0.5, 0.3, 0.2);
  UserProfile a = Blank(0, 2), b = Blank(1, 2);
  a.likes = {4, 2};
  a.comments = {2, 1};
  EXPECT_NEAR(interaction_similarity(a, b, w), 0.4, 1e-12);

  UserProfile idle = Blank(0, 2);
  EXPECT_EQ(interaction_similarity(idle, b, w), 0.0);

  SimilarityWeights likes_only(1, 1, 1, 1, 1, 1, 0, 0);
  UserProfile full = Blank(0, 2);
  full.likes = {5, 5};
  EXPECT_EQ(interaction_similarity(full, b, likes_only), 1.0);

  UserProfile broken = Blank(0, 2);
  broken.likes = {3, -1};
  EXPECT_THROW(interaction_similarity(broken, b, w), DataError);
}

TEST(UnifiedSimilarity, WeightedMeanOfChannels) {
  const std::size_t n = 6;
  UserProfile a = Blank(0, n), b = Blank(1, n);
  a.publication = Dense({1, 2, 0});
  b.publication = Dense({2, 1, 0});
  for (int k : {2, 3, 4, 5}) a.follows[k] = 1;
  for (int k : {2, 3}) b.follows[k] = 1;
  a.likes[0] = 4, a.likes[1] = 2;
  a.comments[0] = 2, a.comments[1] = 1;
  SimilarityWeights channel_only(1, 1, 1, 0.5, 0.5, 0.5, 0.3, 0.2);
  double expect = (0.8 + 0.5 * 2.0 / std::sqrt(8.0) + 0.4) / 3.0;
  EXPECT_NEAR(unified_similarity(a, b, channel_only), expect, 1e-12);
  EXPECT_NEAR(unified_similarity(a, b, channel_only), 0.5179, 1e-4);

  UserProfile z = Blank(0, n), y = Blank(1, n);
  EXPECT_EQ(unified_similarity(z, y, SimilarityWeights()), 0.0);
}

TEST(UnifiedSimilarity, SaturatedSelfProfileIsOne) {
  UserProfile a = Blank(0, 3), b = Blank(1, 3);
  for (UserProfile* p : {&a, &b}) {
    p->publication = Dense({1, 1, 0});
    p->follows[2] = 1;
    p->friends[2] = 1;
  }
  a.likes = {3, 3, 0};
  a.comments = {1, 1, 0};
  a.reposts = {2, 2, 0};
  EXPECT_NEAR(unified_similarity(a, b, SimilarityWeights()), 1.0, 1e-12);
}

TEST(SimilarityWeights, NormalizesAndValidates) {
  SimilarityWeights w(2, 1, 1, 3, 1, 1, 1, 2);
  EXPECT_DOUBLE_EQ(w.p(), 0.5);
  EXPECT_DOUBLE_EQ(w.r(), 0.75);
  EXPECT_DOUBLE_EQ(w.rp(), 0.5);
  EXPECT_THROW(SimilarityWeights(0, 0, 0, 1, 1, 1, 1, 1), ConfigError);
  EXPECT_THROW(SimilarityWeights(1, -1, 1, 1, 1, 1, 1, 1), ConfigError);
}

TEST(Sentiment, LexiconRule) {
  LexiconClassifier lex = LexiconClassifier::english();
  std::vector<std::string> pos{"great", "love"}, neg{"bad"}, tie{"great", "bad"};
  EXPECT_EQ(classify_sentiment(pos, lex), Sentiment::kPositive);
  EXPECT_EQ(classify_sentiment(neg, lex), Sentiment::kNonPositive);
  EXPECT_EQ(classify_sentiment(tie, lex), Sentiment::kNonPositive);
  EXPECT_THROW(LexiconClassifier({}, {}), ConfigError);
}

// Three hand-built users; table entries must match per-pair calls.
SocialData ThreeUsers() {
  SocialData d;
  d.n_users = 3;
  d.publications = {{"jazz piano jazz"}, {"jazz guitar"}, {"piano guitar"}};
  d.follows = {{0, 1}, {1, 0}, {0, 2}, {2, 1}};
  d.likes = {{0, 10, ""}, {0, 11, ""}, {1, 10, ""}, {2, 11, ""}, {2, 12, ""}};
  d.comments = {{0, 10, "love it"}, {1, 10, "great stuff"}, {2, 10, "awful"}};
  d.reposts = {{1, 11, "nice"}, {0, 11, "bad bad"}};
  return d;
}

TEST(Profiles, BuildFromTables) {
  auto profiles = build_profiles(ThreeUsers(), 1);
  ASSERT_EQ(profiles.size(), 3u);
  EXPECT_EQ(profiles[0].follows, (std::vector<std::uint8_t>{0, 1, 1}));
  EXPECT_EQ(profiles[0].friends, (std::vector<std::uint8_t>{0, 1, 0}));
  EXPECT_EQ(profiles[2].friends, (std::vector<std::uint8_t>{0, 0, 0}));
  EXPECT_EQ(profiles[0].likes, (std::vector<std::int32_t>{2, 1, 1}));
  EXPECT_EQ(profiles[2].likes, (std::vector<std::int32_t>{1, 0, 2}));
  // "awful" is filtered out; user 0's repost is negative.
  EXPECT_EQ(profiles[0].comments, (std::vector<std::int32_t>{1, 1, 0}));
  EXPECT_EQ(profiles[2].comments, (std::vector<std::int32_t>{0, 0, 0}));
  EXPECT_EQ(profiles[0].reposts, (std::vector<std::int32_t>{0, 0, 0}));
  EXPECT_EQ(profiles[1].reposts, (std::vector<std::int32_t>{0, 1, 0}));
}

TEST(Profiles, RejectsUnknownUsers) {
  SocialData d = ThreeUsers();
  d.follows.push_back({0, 7});
  EXPECT_THROW(build_profiles(d, 1), DataError);
}

TEST(SimilarityTable, MatchesPairwiseCalls) {
  auto profiles = build_profiles(ThreeUsers(), 1);
  SimilarityWeights w;
  SimilarityTable t = similarity_table(0, profiles, w);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_DOUBLE_EQ(t.at(1), unified_similarity(profiles[0], profiles[1], w));
  EXPECT_DOUBLE_EQ(t.at(2), unified_similarity(profiles[0], profiles[2], w));
  EXPECT_THROW(similarity_table(9, profiles, w), DataError);

  std::vector<UserProfile> single{Blank(0, 1)};
  EXPECT_TRUE(similarity_table(0, single, w).empty());
}

TEST(SimilarityTable, SymmetricConstructionIsSymmetric) {
  SocialData d;
  d.n_users = 4;
  d.publications = {{"rock blues"}, {"rock blues"}, {"pop"}, {"pop rock"}};
  d.follows = {{0, 1}, {1, 0}, {0, 2}, {1, 2}, {0, 3}, {1, 3}};
  d.likes = {{0, 1, ""}, {1, 1, ""}, {0, 2, ""}, {1, 2, ""}, {0, 3, ""}, {1, 4, ""}};
  auto profiles = build_profiles(d, 1);
  SimilarityWeights w;
  EXPECT_DOUBLE_EQ(similarity_table(0, profiles, w).at(1),
                   similarity_table(1, profiles, w).at(0));
}

TEST(SimilarityProperties, RangeSymmetryAndZeroHistory) {
  std::mt19937_64 rng(17);
  const std::size_t n = 8;
  std::uniform_int_distribution<int> bit(0, 1), count(0, 6);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<UserProfile> ps;
    for (std::size_t u = 0; u < n; ++u) ps.push_back(Blank(static_cast<UserId>(u), n));
    for (auto& p : ps) {
      p.publication = Dense({weight(rng) * bit(rng), weight(rng) * bit(rng),
                             weight(rng) * bit(rng)});
      for (std::size_t k = 0; k < n; ++k) {
        if (k != p.user_id) p.follows[k] = static_cast<std::uint8_t>(bit(rng));
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        ps[i].friends[k] = ps[i].follows[k] && ps[k].follows[i];
    for (auto& p : ps) {
      for (auto* row : {&p.likes, &p.comments, &p.reposts}) {
        (*row)[p.user_id] = count(rng);
        for (std::size_t k = 0; k < n; ++k) {
          if (k != p.user_id) {
            (*row)[k] = std::uniform_int_distribution<int>(0, (*row)[p.user_id])(rng);
          }
        }
      }
    }
    SimilarityWeights w(weight(rng), weight(rng) + 0.01, weight(rng), weight(rng),
                        weight(rng) + 0.01, weight(rng) + 0.01, weight(rng), weight(rng));
    const UserProfile& a = ps[trial % n];
    const UserProfile& b = ps[(trial + 1) % n];
    for (double s : {publication_similarity(a.publication, b.publication),
                     connection_similarity(a, b, w), interaction_similarity(a, b, w),
                     unified_similarity(a, b, w)}) {
      ASSERT_GE(s, 0.0);
      ASSERT_LE(s, 1.0 + 1e-12);
    }
    ASSERT_DOUBLE_EQ(publication_similarity(a.publication, b.publication),
                     publication_similarity(b.publication, a.publication));
    ASSERT_DOUBLE_EQ(connection_similarity(a, b, w), connection_similarity(b, a, w));
    UserProfile empty = Blank(a.user_id, n);
    ASSERT_EQ(unified_similarity(empty, b, w), 0.0);
  }
}

TEST(SimilarityProperties, CoLikeNeverDecreasesLikeTerm) {
  SimilarityWeights likes_only(1, 1, 1, 1, 1, 1, 0, 0);
  UserProfile b = Blank(1, 2);
  for (int total = 1; total < 10; ++total) {
    for (int co = 0; co < total; ++co) {
      UserProfile a = Blank(0, 2);
      a.likes = {total, co};
      double before = interaction_similarity(a, b, likes_only);
      a.likes = {total + 1, co + 1};
      EXPECT_GE(interaction_similarity(a, b, likes_only), before);
    }
  }
}

}  // namespace
}  // namespace ppsr::social
