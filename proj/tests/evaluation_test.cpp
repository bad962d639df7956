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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>

#include "ppsr/data/synthetic.hpp"
#include "ppsr/eval/baselines.hpp"
#include "ppsr/eval/experiment.hpp"
#include "ppsr/eval/metrics.hpp"
#include "ppsr/eval/recommend.hpp"

namespace ppsr::eval {
namespace {

// ---- oracles -------------------------------------------------------------------

double BruteAccuracy(const Labels& pred, const Labels& truth) {
  int k = std::max(*std::max_element(pred.begin(), pred.end()),
                   *std::max_element(truth.begin(), truth.end())) + 1;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int hit = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hit += perm[pred[i]] == truth[i];
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / pred.size();
}

double BruteF1(const Labels& pred, const Labels& truth) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      bool p = pred[i] == pred[j], t = truth[i] == truth[j];
      tp += p && t;
      fp += p && !t;
      fn += !p && t;
    }
  }
  if (tp == 0) return 0;
  double prec = tp / (tp + fp), rec = tp / (tp + fn);
  return 2 * prec * rec / (prec + rec);
}

Labels RandomLabels(std::mt19937& gen, std::size_t n, int k) {
  Labels l(n);
  for (auto& v : l) v = static_cast<int>(gen() % k);
  return l;
}

Labels Relabel(const Labels& l, const std::vector<int>& perm) {
  Labels out(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) out[i] = perm[l[i]];
  return out;
}

// ---- clustering metrics -------------------------------------------------------

TEST(MetricsTest, HandExamples) {
  EXPECT_DOUBLE_EQ(clustering_accuracy({0, 0, 1, 1}, {1, 1, 1, 0}), 0.75);
  EXPECT_NEAR(pairwise_f1({0, 0, 1, 1}, {0, 1, 1, 1}), 0.4, 1e-12);
  EXPECT_NEAR(nmi({0, 0, 1, 1}, {0, 1, 0, 1}), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(pairwise_f1({0, 1, 2, 3}, {0, 0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(nmi({0, 0, 0, 0}, {0, 1, 0, 1}), 0.0);
}

TEST(MetricsTest, IdenticalAndRelabeledLabelingsScoreOne) {
  Labels truth = {0, 0, 1, 1, 2, 2, 2};
  Labels moved = Relabel(truth, {2, 0, 1});
  for (const Labels& p : {truth, moved}) {
    EXPECT_DOUBLE_EQ(clustering_accuracy(p, truth), 1.0);
    EXPECT_DOUBLE_EQ(pairwise_f1(p, truth), 1.0);
    EXPECT_NEAR(nmi(p, truth), 1.0, 1e-12);
  }
}

TEST(MetricsTest, LengthMismatchIsAnError) {
  EXPECT_THROW(clustering_accuracy({0, 1}, {0}), DataError);
  EXPECT_THROW(pairwise_f1({0}, {0, 1}), DataError);
  EXPECT_THROW(nmi({}, {}), DataError);
}

TEST(MetricsTest, AgreesWithBruteForceOracles) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + gen() % 12;
    Labels p = RandomLabels(gen, n, 1 + gen() % 4), t = RandomLabels(gen, n, 1 + gen() % 4);
    ASSERT_NEAR(clustering_accuracy(p, t), BruteAccuracy(p, t), 1e-12);
    ASSERT_NEAR(pairwise_f1(p, t), BruteF1(p, t), 1e-12);
  }
}

TEST(MetricsTest, BoundedAndPermutationInvariant) {
  std::mt19937 gen(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 30;
    const int k = 1 + gen() % 5;
    Labels p = RandomLabels(gen, n, k), t = RandomLabels(gen, n, k);
    ClusterScores s = score_clustering(p, t);
    for (double v : {s.accuracy, s.f1, s.nmi}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    ClusterScores r = score_clustering(Relabel(p, perm), t);
    ASSERT_NEAR(r.accuracy, s.accuracy, 1e-12);
    ASSERT_NEAR(r.f1, s.f1, 1e-12);
    ASSERT_NEAR(r.nmi, s.nmi, 1e-12);
  }
}

TEST(MetricsTest, SummaryStatistics) {
  Summary s = summarize({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_NEAR(s.stddev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_DOUBLE_EQ(summarize({7}).stddev, 0.0);
}

// ---- ranking metrics ------------------------------------------------------------

TEST(RankingMetricsTest, HandExamples) {
  std::vector<std::vector<int>> lists = {{1, 9, 2, 8, 7}};
  std::vector<std::set<int>> rel = {{1, 2, 3, 4}};
  auto c = precision_recall_at_k(lists, rel, 5, 5);
  EXPECT_DOUBLE_EQ(c[0].precision, 0.4);
  EXPECT_DOUBLE_EQ(c[0].recall, 0.5);

  auto exact = precision_recall_at_k<int>({{1, 2, 3}}, {{1, 2, 3}}, 3, 3);
  EXPECT_DOUBLE_EQ(exact[0].precision, 1.0);
  EXPECT_DOUBLE_EQ(exact[0].recall, 1.0);
  auto none = precision_recall_at_k<int>({{4, 5, 6}}, {{1, 2, 3}}, 3, 3);
  EXPECT_DOUBLE_EQ(none[0].precision, 0.0);
  EXPECT_DOUBLE_EQ(none[0].recall, 0.0);
}

TEST(RankingMetricsTest, SkipsUsersWithoutRelevantItemsAndRejectsEmpty) {
  auto c = precision_recall_at_k<int>({{1, 2, 3}, {1, 2, 3}}, {{1}, {}}, 3, 3);
  EXPECT_NEAR(c[0].precision, 1.0 / 3, 1e-12);
  EXPECT_THROW(precision_recall_at_k<int>({{1}}, {{}}, 3, 3), DataError);
  EXPECT_THROW(precision_recall_at_k<int>({}, {}, 3, 3), DataError);
  EXPECT_THROW(precision_recall_at_k<int>({{1}}, {{1}}, 0, 3), ConfigError);
}

TEST(RankingMetricsTest, RecallNeverDecreasesWithK) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<int>> lists(5);
    std::vector<std::set<int>> rel(5);
    for (int u = 0; u < 5; ++u) {
      for (int i = 0; i < 12; ++i) lists[u].push_back(gen() % 40);
      for (int i = 0; i < 4; ++i) rel[u].insert(gen() % 40);
    }
    auto c = precision_recall_at_k(lists, rel, 3, 10);
    for (std::size_t i = 1; i < c.size(); ++i) ASSERT_GE(c[i].recall, c[i - 1].recall);
  }
}

// ---- baselines -----------------------------------------------------------------

data::Dataset Planted(double noise, std::uint64_t seed) {
  data::SyntheticSpec spec;
  spec.pattern = data::ViewPattern::kInformative;
  spec.noise = {noise};
  spec.seed = seed;
  return data::generate_synthetic(spec);
}

TEST(BaselineTest, RecoverZeroNoisePlantedClusters) {
  data::Dataset ds = Planted(0.0, 3);
  for (auto m : {BaselineMethod::kKMeans, BaselineMethod::kSvd, BaselineMethod::kNmf}) {
    auto labels = baseline_cluster(ds.views[0].data, 3, m, 11);
    EXPECT_DOUBLE_EQ(clustering_accuracy(labels, ds.item_truth), 1.0) << to_string(m);
  }
}

TEST(BaselineTest, ZeroNoiseSingleViewNmfRecoversPlantedClusters) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    data::Dataset ds = Planted(0.0, seed);
    auto model = nmf::nmf_factorize(ds.views[0], 3, nmf::MultiViewConfig::defaults(1, 3));
    EXPECT_DOUBLE_EQ(clustering_accuracy(model.assignment, ds.item_truth), 1.0) << seed;
  }
}

TEST(BaselineTest, SingleClusterAndDeterminism) {
  data::Dataset ds = Planted(0.3, 4);
  std::map<int, int> share;
  for (int c : ds.item_truth) ++share[c];
  int biggest = 0;
  for (auto [c, n] : share) biggest = std::max(biggest, n);
  for (auto m : {BaselineMethod::kKMeans, BaselineMethod::kSvd, BaselineMethod::kNmf}) {
    auto one = baseline_cluster(ds.views[0].data, 1, m, 2);
    EXPECT_DOUBLE_EQ(clustering_accuracy(one, ds.item_truth),
                     static_cast<double>(biggest) / ds.n_items());
    EXPECT_EQ(baseline_cluster(ds.views[0].data, 3, m, 9),
              baseline_cluster(ds.views[0].data, 3, m, 9));
  }
  EXPECT_THROW(baseline_cluster(ds.views[0].data, 500, BaselineMethod::kKMeans, 1), ConfigError);
}

TEST(BaselineTest, KMeansHandlesDuplicatePoints) {
  Matrix x(6, 1);
  x << 0, 0, 0, 0, 5, 9;
  KMeansResult r = kmeans(x, 3, 1);
  std::set<int> used(r.assignment.begin(), r.assignment.end());
  EXPECT_EQ(used.size(), 3u);
  EXPECT_EQ(r.assignment[0], r.assignment[3]);
  EXPECT_NEAR(r.inertia, 0.0, 1e-12);
}

TEST(BaselineTest, ConcatenatedViewsAreNormalized) {
  data::Dataset ds = Planted(0.3, 2);
  Matrix cat = concatenate_views(ds.views);
  EXPECT_EQ(cat.cols(), ds.views[0].data.cols() + ds.views[1].data.cols());
  EXPECT_NEAR(cat.leftCols(ds.views[0].data.cols()).norm(), 1.0, 1e-12);
}

// ---- recommendation harness -----------------------------------------------------

data::Dataset SmallSocial(double signal, std::uint64_t seed) {
  data::SyntheticSpec spec;
  spec.n_items = 36;
  spec.n_users = 24;
  spec.features_per_view = 12;
  spec.social_signal = signal;
  spec.seed = seed;
  return data::generate_synthetic(spec);
}

RecommendSettings Settings() {
  RecommendSettings s;
  s.nmf.lambda_pair.setConstant(1.0);
  s.nmf.lambda_pair.diagonal().setZero();
  return s;
}

TEST(RecommendTest, SplitIsDisjointAndProportional) {
  data::Dataset ds = SmallSocial(1, 1);
  EvalSplit split = make_split(ds.ratings, Settings(), 5);
  std::set<UserId> all(split.train.begin(), split.train.end());
  for (UserId u : split.test) EXPECT_TRUE(all.insert(u).second);
  EXPECT_EQ(all.size(), ds.n_users());
  EXPECT_LE(std::abs(static_cast<double>(split.train.size()) - 0.75 * ds.n_users()), 1.0);
  RankMatrix visible = visible_ratings(ds.ratings, split);
  for (std::size_t t = 0; t < split.test.size(); ++t) {
    for (ItemId i : split.relevant[t]) {
      EXPECT_EQ(visible.at(split.test[t], i), 0);
      EXPECT_GE(ds.ratings.at(split.test[t], i), 4);
    }
    for (ItemId i : split.observed[t]) EXPECT_GT(visible.at(split.test[t], i), 0);
  }
  EXPECT_EQ(make_split(ds.ratings, Settings(), 5).test, split.test);
}

TEST(RecommendTest, ClusteringListSkipsObservedAndFollowsPopularity) {
  RankMatrix r(3, 5);
  r.set(0, 0, 5);
  r.set(1, 2, 5);
  r.set(2, 2, 4);
  r.set(1, 3, 4);
  std::vector<int> assign = {0, 0, 0, 0, 1};
  auto pop = popularity_rank(r, 4);
  auto list = clustering_list(assign, {0}, r, 0, 4, pop);
  EXPECT_EQ(list.items, (std::vector<ItemId>{2, 3, 1}));
  EXPECT_EQ(list.provenance, protocol::Provenance::kClustering);
}

TEST(RecommendTest, ProtocolRoutesMatchPlaintextMetrics) {
  data::Dataset ds = SmallSocial(1, 2);
  auto profiles = social::build_profiles(ds.social);
  SeededRandom rng(1);
  crypto::Keypair keys = crypto::keygen(crypto::kTestKeyBits, rng);
  RecommendSettings s = Settings();
  SeedOutcome plain = evaluate_recommenders(ds, profiles, s, 3);
  s.route = Route::kInProcess;
  SeedOutcome inproc = evaluate_recommenders(ds, profiles, s, 3, &keys);
  EXPECT_EQ(plain.lists, inproc.lists);
  for (const char* m : kModels) {
    for (std::size_t i = 0; i < plain.curves[m].size(); ++i) {
      EXPECT_EQ(plain.curves[m][i].precision, inproc.curves[m][i].precision);
      EXPECT_EQ(plain.curves[m][i].recall, inproc.curves[m][i].recall);
    }
  }
  s.route = Route::kInProcess;
  EXPECT_THROW(evaluate_recommenders(ds, profiles, s, 3, nullptr), ConfigError);
}

TEST(RecommendTest, WithoutSocialSignalPpsrEqualsMultiView) {
  data::Dataset ds = SmallSocial(0, 4);
  auto profiles = social::build_profiles(ds.social);
  SeedOutcome o = evaluate_recommenders(ds, profiles, Settings(), 4);
  EXPECT_EQ(o.degenerate_users, o.test_users);
  EXPECT_EQ(o.lists["PPSR"], o.lists["RM-MV"]);
  EXPECT_EQ(o.lists["RM-SVS"], o.lists["RM-SV"]);
}

// ---- experiment config -------------------------------------------------------------

TEST(ExperimentTest, ParsesAndRejectsUnknownKeys) {
  Json j = Json::parse(R"({"clustering": {"K": 4, "lambda_view": 2},
                           "evaluation": {"seeds": [3, 4]}})");
  ExperimentConfig c = parse_config(j);
  EXPECT_EQ(c.K, 4);
  EXPECT_EQ(c.nmf_config(3).lambda_view, (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  EXPECT_THROW(parse_config(Json::parse(R"({"clustering": {"k": 4}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"bogus": 1})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"clustering": {"K": "three"}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"protocol": {"route": "carrier-pigeon"}})")),
               ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"dataset": {"kind": "lastfm"}})")), ConfigError);
}

TEST(ExperimentTest, OverridesAndDigest) {
  Json j = Json::object();
  apply_override(j, "clustering.K=5");
  apply_override(j, "protocol.route=inproc");
  ExperimentConfig c = parse_config(j);
  EXPECT_EQ(c.K, 5);
  EXPECT_EQ(c.route, "inproc");
  EXPECT_EQ(config_digest(c), config_digest(parse_config(j)));
  EXPECT_NE(config_digest(c), config_digest(ExperimentConfig{}));
  EXPECT_THROW(apply_override(j, "novalue"), ConfigError);
}

TEST(ExperimentTest, RerunsWriteIdenticalFiles) {
  Json j = Json::parse(R"({"synthetic": {"n_items": 36, "n_users": 24, "features_per_view": 12},
                           "clustering": {"lambda_pair": 1.0},
                           "evaluation": {"seeds": [1, 2]}})");
  ExperimentConfig c = parse_config(j);
  namespace fs = std::filesystem;
  fs::path a = fs::temp_directory_path() / "ppsr_eval_a", b = fs::temp_directory_path() / "ppsr_eval_b";
  fs::remove_all(a);
  fs::remove_all(b);
  auto files_a = write_results(run_experiment(c), a);
  write_results(run_experiment(c), b);
  ASSERT_EQ(files_a.size(), 3u);
  for (const auto& f : files_a) {
    std::string ta = data::read_text_file(f), tb = data::read_text_file(b / f.filename());
    EXPECT_EQ(ta, tb) << f;
    EXPECT_EQ(ta.rfind("# config_digest=" + config_digest(c), 0), 0u);
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace
}  // namespace ppsr::eval
