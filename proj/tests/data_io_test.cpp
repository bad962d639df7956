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

#include <filesystem>
#include <fstream>
#include <string>

#include "ppsr/data/dump.hpp"
#include "ppsr/data/hetrec.hpp"
#include "ppsr/data/synthetic.hpp"
#include "ppsr/data/tsv.hpp"

namespace ppsr::data {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("ppsr_data_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  void Write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name, std::ios::binary) << text;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void WriteLastfm(const TempDir& dir, const std::string& friends) {
  dir.Write("user_artists.dat", "userID\tartistID\tweight\n1\t10\t50\n2\t10\t5\n3\t11\t7\n1\t11\t3\n");
  dir.Write("user_friends.dat", friends);
  dir.Write("user_taggedartists.dat",
            "userID\tartistID\ttagID\tday\tmonth\tyear\n1\t10\t100\t1\t1\t2008\n"
            "2\t10\t100\t1\t1\t2008\n3\t11\t101\t1\t1\t2008\n");
  dir.Write("tags.dat", "tagID\ttagValue\n100\tgreat rock\n101\tjazz\n");
}

// ---- tsv -------------------------------------------------------------------

TEST(TsvTest, HeaderAndCrlfAreHandled) {
  TsvTable t = parse_tsv("a\tb\r\n1\t2\r\n\r\n3\t4\r\n", {"a", "b"});
  EXPECT_TRUE(t.had_header);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.integer(1, 1), 4);
  EXPECT_EQ(t.line_numbers[1], 4u);
  TsvTable bare = parse_tsv("5\t6", {"a", "b"});
  EXPECT_FALSE(bare.had_header);
  EXPECT_EQ(bare.integer(0, 0), 5);
}

TEST(TsvTest, ErrorsNameTheLine) {
  try {
    parse_tsv("a\tb\n1\t2\nx1\t3\n", {"a", "b"}, "f.dat").integer(1, 0);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("f.dat:3"), std::string::npos) << e.what();
  }
  try {
    parse_tsv("1\t2\n1\t2\t3\n", {"a", "b"}, "g.dat");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("g.dat:2"), std::string::npos) << e.what();
  }
  TsvTable neg = parse_tsv("1\t-2\n", {"a", "b"});
  EXPECT_THROW(neg.count(0, 1), DataError);
  EXPECT_EQ(parse_tsv("1\t2.5\n", {"a", "b"}).real(0, 1), 2.5);
}

// ---- hetrec ----------------------------------------------------------------

TEST(HetrecTest, FriendFixtureBuildsFollowAndFriendTables) {
  TempDir dir;
  WriteLastfm(dir, "userID\tfriendID\n1\t2\n2\t1\n1\t3\n");
  Dataset ds = load_hetrec(dir.path(), HetrecKind::kLastfm);
  ASSERT_EQ(ds.user_ids, (std::vector<std::int64_t>{1, 2, 3}));
  auto profiles = social::build_profiles(ds.social, 1);
  // dense ids: 1 -> 0, 2 -> 1, 3 -> 2
  EXPECT_EQ(profiles[0].follows[1], 1);
  EXPECT_EQ(profiles[1].follows[0], 1);
  EXPECT_EQ(profiles[0].follows[2], 1);
  EXPECT_EQ(profiles[2].follows[0], 0);
  EXPECT_EQ(profiles[0].friends[1], 1);
  EXPECT_EQ(profiles[0].friends[2], 0);
}

TEST(HetrecTest, ViewsRatingsAndSocialTables) {
  TempDir dir;
  WriteLastfm(dir, "userID\tfriendID\n1\t2\n1\t2\n");
  Dataset ds = load_hetrec(dir.path(), HetrecKind::kLastfm);
  ASSERT_EQ(ds.views.size(), 2u);
  EXPECT_EQ(ds.item_ids, (std::vector<std::int64_t>{10, 11}));
  EXPECT_EQ(ds.views[0].data(0, 0), 2.0);  // artist 10 tagged twice with tag 100
  EXPECT_EQ(ds.views[0].data(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(ds.views[1].data(0, 0), std::log1p(50.0));
  // user 1: artist 10 (50) ranks above artist 11 (3)
  EXPECT_EQ(ds.ratings.at(0, 0), 5);
  EXPECT_EQ(ds.ratings.at(0, 1), 3);
  EXPECT_EQ(ds.ratings.at(1, 1), 0);
  EXPECT_EQ(ds.social.follows.size(), 1u);
  ASSERT_FALSE(ds.warnings.empty());
  EXPECT_NE(ds.warnings.back().find("duplicate follow"), std::string::npos);
  EXPECT_EQ(ds.social.publications[0], (std::vector<std::string>{"great rock"}));
  EXPECT_EQ(ds.social.likes.size(), 4u);
}

TEST(HetrecTest, EmptyTagFileIsRejected) {
  TempDir dir;
  WriteLastfm(dir, "userID\tfriendID\n1\t2\n");
  dir.Write("user_taggedartists.dat", "");
  try {
    load_hetrec(dir.path(), HetrecKind::kLastfm);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("zero columns"), std::string::npos);
  }
}

TEST(HetrecTest, NonIntegerIdAndMissingFile) {
  TempDir dir;
  WriteLastfm(dir, "userID\tfriendID\n1\t2\n1\tbob\n");
  try {
    load_hetrec(dir.path(), HetrecKind::kLastfm);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("user_friends.dat:3"), std::string::npos) << e.what();
  }
  fs::remove(dir.path() / "user_artists.dat");
  EXPECT_THROW(load_hetrec(dir.path(), HetrecKind::kLastfm), DataError);
  EXPECT_THROW(parse_hetrec_kind("ciao"), ConfigError);
}

TEST(HetrecTest, MovielensRatingsRoundHalfUp) {
  TempDir dir;
  dir.Write("user_ratedmovies.dat",
            "userID\tmovieID\trating\td\tm\ty\th\tmi\ts\n"
            "7\t1\t3.5\t1\t1\t2000\t0\t0\t0\n7\t2\t0.5\t1\t1\t2000\t0\t0\t0\n"
            "8\t1\t5\t1\t1\t2000\t0\t0\t0\n");
  dir.Write("movie_tags.dat", "movieID\ttagID\ttagWeight\n1\t4\t3\n2\t5\t1\n");
  Dataset ds = load_hetrec(dir.path(), HetrecKind::kMovielens);
  EXPECT_EQ(ds.ratings.at(0, 0), 4);
  EXPECT_EQ(ds.ratings.at(0, 1), 1);
  EXPECT_EQ(ds.ratings.at(1, 0), 5);
  EXPECT_EQ(ds.views[0].data(0, 0), 3.0);
  EXPECT_TRUE(ds.social.follows.empty());
}

TEST(HetrecTest, DeliciousCountsTagsPerBookmark) {
  TempDir dir;
  dir.Write("user_taggedbookmarks.dat",
            "userID\tbookmarkID\ttagID\tday\tmonth\tyear\thour\tminute\tsecond\n"
            "1\t5\t9\t1\t1\t2009\t0\t0\t0\n1\t5\t8\t1\t1\t2009\t0\t0\t0\n"
            "1\t6\t9\t1\t1\t2009\t0\t0\t0\n2\t6\t9\t1\t1\t2009\t0\t0\t0\n");
  dir.Write("user_contacts.dat",
            "userID\tcontactID\td\tm\ty\th\tmi\ts\n1\t2\t1\t1\t2009\t0\t0\t0\n");
  Dataset ds = load_hetrec(dir.path(), HetrecKind::kDelicious);
  EXPECT_EQ(ds.views[1].data(0, 0), 2.0);  // user 1 put two tags on bookmark 5
  EXPECT_EQ(ds.ratings.at(0, 0), 5);
  EXPECT_EQ(ds.social.follows.size(), 1u);
  EXPECT_EQ(ds.social.comments.front().text, "tag9");
}

TEST(HetrecTest, ItemCapKeepsMostActiveItems) {
  TempDir dir;
  WriteLastfm(dir, "userID\tfriendID\n1\t2\n");
  HetrecOptions opt;
  opt.max_items = 1;
  Dataset ds = load_hetrec(dir.path(), HetrecKind::kLastfm, opt);
  EXPECT_EQ(ds.item_ids, (std::vector<std::int64_t>{10}));
}

// ---- synthetic ---------------------------------------------------------------

TEST(SyntheticTest, IsDeterministicAndShaped) {
  SyntheticSpec spec;
  spec.seed = 42;
  Dataset a = generate_synthetic(spec), b = generate_synthetic(spec);
  EXPECT_EQ(dump_to_string(a), dump_to_string(b));
  EXPECT_EQ(a.n_items(), spec.n_items);
  EXPECT_EQ(a.n_users(), spec.n_users);
  for (const auto& v : a.views) EXPECT_GE(v.data.minCoeff(), 0.0);
  spec.seed = 43;
  EXPECT_NE(dump_to_string(generate_synthetic(spec)), dump_to_string(a));
}

TEST(SyntheticTest, ComplementaryViewsHideADifferentPair) {
  SyntheticSpec spec;
  spec.noise = {0.0};
  Dataset ds = generate_synthetic(spec);
  // Support pattern of a row = which feature block is lit.
  auto block = [&](int s, std::size_t i) {
    Eigen::Index j;
    ds.views[s].data.row(i).maxCoeff(&j);
    return static_cast<int>(j / (spec.features_per_view / spec.k_true));
  };
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    int c = ds.item_truth[i];
    EXPECT_EQ(block(0, i), c == 1 ? 0 : c);
    EXPECT_EQ(block(1, i), c == 2 ? 1 : c);
  }
}

TEST(SyntheticTest, SocialSignalZeroMeansNoSocialData) {
  SyntheticSpec spec;
  spec.social_signal = 0;
  Dataset ds = generate_synthetic(spec);
  EXPECT_TRUE(ds.social.follows.empty());
  EXPECT_TRUE(ds.social.likes.empty());
  for (const auto& p : ds.social.publications) EXPECT_TRUE(p.empty());
  spec.social_signal = 1;
  EXPECT_FALSE(generate_synthetic(spec).social.follows.empty());
}

TEST(SyntheticTest, RejectsInconsistentSpecs) {
  SyntheticSpec spec;
  spec.k_true = 200;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = {};
  spec.noise = {0.1, 0.2, 0.3};
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = {};
  spec.social_signal = 1.5;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
}

// ---- dump --------------------------------------------------------------------

TEST(DumpTest, RoundTripsExactly) {
  SyntheticSpec spec;
  spec.n_items = 20;
  spec.n_users = 12;
  Dataset ds = generate_synthetic(spec);
  std::string text = dump_to_string(ds);
  Dataset back = parse_dump(text);
  EXPECT_EQ(dump_to_string(back), text);
  EXPECT_EQ(back.views[1].data, ds.views[1].data);
  EXPECT_EQ(back.social.comments.size(), ds.social.comments.size());
}

TEST(DumpTest, RejectsCorruptDumps) {
  EXPECT_THROW(parse_dump("nope\n"), DataError);
  SyntheticSpec spec;
  spec.n_items = 6;
  spec.n_users = 4;
  std::string text = dump_to_string(generate_synthetic(spec));
  EXPECT_THROW(parse_dump(text.substr(0, text.size() / 2)), DataError);
}

}  // namespace
}  // namespace ppsr::data
