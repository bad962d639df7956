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

// Declarative experiment configuration and the full evaluation run.
//
// Configuration is one JSON object; every key is optional and unknown keys
// are rejected. See configs/example.json for the complete set:
//
//   dataset     kind (synthetic | lastfm | delicious | movielens-hetrec),
//               path, max_items, max_tags
//   synthetic   n_items, n_users, k_true, n_views, features_per_view, noise
//               (number or per-view array), pattern, tastes_per_cluster,
//               rating_density, social_signal
//   clustering  K, lambda_view (number or array), lambda_pair, max_iters,
//               rel_tol, epsilon, single_view, baselines
//   similarity  min_df, weights {P, C, I, R, F, Lk, Cmt, Rp}
//   protocol    key_bits, scale, route (plaintext | inproc | socket)
//   evaluation  seeds, train_fraction, observed_per_user, relevant_threshold,
//               k_min, k_max
//   output      dir
//
// Output files (TSV, written to a temporary name and renamed into place):
//   clustering.tsv        per algorithm mean/std of accuracy, F1 and NMI
//                         (only when the dataset has planted labels)
//   curves.tsv            model, k, precision, recall (mean over seeds)
//   curves_per_seed.tsv   seed, model, k, precision, recall
// Each starts with a comment line carrying the config digest and seeds.

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ppsr/crypto/bigint.hpp"
#include "ppsr/crypto/paillier.hpp"
#include "ppsr/data/dump.hpp"
#include "ppsr/data/hetrec.hpp"
#include "ppsr/data/synthetic.hpp"
#include "ppsr/error.hpp"
#include "ppsr/eval/baselines.hpp"
#include "ppsr/eval/metrics.hpp"
#include "ppsr/eval/recommend.hpp"

namespace ppsr::eval {

using Json = nlohmann::json;

struct ExperimentConfig {
  std::string dataset_kind = "synthetic";
  std::string dataset_path;
  data::HetrecOptions hetrec;
  data::SyntheticSpec synthetic;

  int K = 3;
  std::vector<double> lambda_view;  // empty: 1 per view
  double lambda_pair = 0.1;
  int max_iters = 300;
  double rel_tol = 1e-5;
  double epsilon = 1e-12;
  std::size_t single_view = 0;
  std::vector<std::string> baselines = {"kmeans", "svd", "nmf"};

  std::size_t min_df = 2;
  std::array<double, 8> weights = {1, 1, 1, 1, 1, 1, 1, 1};  // P C I R F Lk Cmt Rp

  std::size_t key_bits = 1024;
  std::uint64_t scale = 1'000'000;
  std::string route = "plaintext";

  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double train_fraction = 0.75;
  std::size_t observed_per_user = 3;
  int relevant_threshold = 4;
  int k_min = 3;
  int k_max = 10;

  std::string output_dir = "results";

  social::SimilarityWeights similarity_weights() const {
    return social::SimilarityWeights(weights[0], weights[1], weights[2], weights[3], weights[4],
                                     weights[5], weights[6], weights[7]);
  }

  nmf::MultiViewConfig nmf_config(std::size_t n_views) const {
    nmf::MultiViewConfig c = nmf::MultiViewConfig::defaults(n_views, K);
    if (!lambda_view.empty()) {
      c.lambda_view = lambda_view.size() == 1 ? std::vector<double>(n_views, lambda_view[0])
                                              : lambda_view;
    }
    c.lambda_pair.setConstant(lambda_pair);
    c.lambda_pair.diagonal().setZero();
    c.max_iters = max_iters;
    c.rel_tol = rel_tol;
    c.epsilon = epsilon;
    return c;
  }

  RecommendSettings recommend_settings(std::size_t n_views) const {
    RecommendSettings s;
    s.train_fraction = train_fraction;
    s.observed_per_user = observed_per_user;
    s.relevant_threshold = relevant_threshold;
    s.k_min = k_min;
    s.k_max = k_max;
    s.single_view = single_view;
    s.nmf = nmf_config(n_views);
    s.weights = similarity_weights();
    s.min_df = min_df;
    s.route = parse_route(route);
    s.codec = crypto::FixedPointCodec(scale);
    return s;
  }

  // Checks everything that can be checked without loading data.
  void validate() const {
    if (dataset_kind != "synthetic") {
      data::parse_hetrec_kind(dataset_kind);
      if (dataset_path.empty()) throw ConfigError("dataset.path is required for " + dataset_kind);
    } else {
      synthetic.validate();
    }
    if (K <= 0) throw ConfigError("clustering.K must be positive");
    if (max_iters <= 0 || !(rel_tol > 0) || !(epsilon > 0)) {
      throw ConfigError("clustering: max_iters, rel_tol and epsilon must be positive");
    }
    if (!(lambda_pair >= 0)) throw ConfigError("clustering.lambda_pair must be >= 0");
    for (const auto& b : baselines) parse_baseline(b);
    similarity_weights();
    parse_route(route);
    if (key_bits < 512 || key_bits % 2) throw ConfigError("protocol.key_bits must be even and >= 512");
    if (scale == 0) throw ConfigError("protocol.scale must be positive");
    if (seeds.empty()) throw ConfigError("evaluation.seeds must not be empty");
    if (!(train_fraction > 0 && train_fraction < 1)) {
      throw ConfigError("evaluation.train_fraction must be in (0, 1)");
    }
    if (observed_per_user == 0) throw ConfigError("evaluation.observed_per_user must be positive");
    if (k_min < 1 || k_max < k_min) throw ConfigError("evaluation: need 1 <= k_min <= k_max");
    if (relevant_threshold < 1) throw ConfigError("evaluation.relevant_threshold must be >= 1");
  }
};

namespace detail {

class Section {
 public:
  Section(const Json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError(name_ + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    used_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(name_ + "." + key + ": " + e.what());
    }
  }

  // A number or an array of numbers.
  void get_list(const char* key, std::vector<double>& out) {
    if (!j_.contains(key)) return;
    if (j_.at(key).is_number()) {
      used_.insert(key);
      out = {j_.at(key).get<double>()};
      return;
    }
    get(key, out);
  }

  std::optional<Section> child(const char* key) {
    if (!j_.contains(key)) return std::nullopt;
    used_.insert(key);
    return Section(j_.at(key), name_.empty() ? key : name_ + "." + key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.contains(k)) {
        throw ConfigError("unknown config key '" + (name_.empty() ? k : name_ + "." + k) + "'");
      }
    }
  }

 private:
  const Json& j_;
  std::string name_;
  std::set<std::string> used_;
};

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
  ExperimentConfig c;
  detail::Section root(j, "");
  if (auto s = root.child("dataset")) {
    s->get("kind", c.dataset_kind);
    s->get("path", c.dataset_path);
    s->get("max_items", c.hetrec.max_items);
    s->get("max_tags", c.hetrec.max_tags);
    s->finish();
  }
  if (auto s = root.child("synthetic")) {
    auto& y = c.synthetic;
    s->get("n_items", y.n_items);
    s->get("n_users", y.n_users);
    s->get("k_true", y.k_true);
    s->get("n_views", y.n_views);
    s->get("features_per_view", y.features_per_view);
    s->get_list("noise", y.noise);
    std::string pattern;
    s->get("pattern", pattern);
    if (!pattern.empty()) y.pattern = data::parse_view_pattern(pattern);
    s->get("tastes_per_cluster", y.tastes_per_cluster);
    s->get("rating_density", y.rating_density);
    s->get("social_signal", y.social_signal);
    s->finish();
  }
  if (auto s = root.child("clustering")) {
    s->get("K", c.K);
    s->get_list("lambda_view", c.lambda_view);
    s->get("lambda_pair", c.lambda_pair);
    s->get("max_iters", c.max_iters);
    s->get("rel_tol", c.rel_tol);
    s->get("epsilon", c.epsilon);
    s->get("single_view", c.single_view);
    s->get("baselines", c.baselines);
    s->finish();
  }
  if (auto s = root.child("similarity")) {
    s->get("min_df", c.min_df);
    if (auto w = s->child("weights")) {
      const char* names[8] = {"P", "C", "I", "R", "F", "Lk", "Cmt", "Rp"};
      for (int i = 0; i < 8; ++i) w->get(names[i], c.weights[i]);
      w->finish();
    }
    s->finish();
  }
  if (auto s = root.child("protocol")) {
    s->get("key_bits", c.key_bits);
    s->get("scale", c.scale);
    s->get("route", c.route);
    s->finish();
  }
  if (auto s = root.child("evaluation")) {
    s->get("seeds", c.seeds);
    s->get("train_fraction", c.train_fraction);
    s->get("observed_per_user", c.observed_per_user);
    s->get("relevant_threshold", c.relevant_threshold);
    s->get("k_min", c.k_min);
    s->get("k_max", c.k_max);
    s->finish();
  }
  if (auto s = root.child("output")) {
    s->get("dir", c.output_dir);
    s->finish();
  }
  root.finish();
  c.validate();
  return c;
}

inline Json to_json(const ExperimentConfig& c) {
  const auto& y = c.synthetic;
  return Json{
      {"dataset",
       {{"kind", c.dataset_kind},
        {"path", c.dataset_path},
        {"max_items", c.hetrec.max_items},
        {"max_tags", c.hetrec.max_tags}}},
      {"synthetic",
       {{"n_items", y.n_items},
        {"n_users", y.n_users},
        {"k_true", y.k_true},
        {"n_views", y.n_views},
        {"features_per_view", y.features_per_view},
        {"noise", y.noise},
        {"pattern", y.pattern == data::ViewPattern::kComplementary ? "complementary" : "informative"},
        {"tastes_per_cluster", y.tastes_per_cluster},
        {"rating_density", y.rating_density},
        {"social_signal", y.social_signal}}},
      {"clustering",
       {{"K", c.K},
        {"lambda_view", c.lambda_view},
        {"lambda_pair", c.lambda_pair},
        {"max_iters", c.max_iters},
        {"rel_tol", c.rel_tol},
        {"epsilon", c.epsilon},
        {"single_view", c.single_view},
        {"baselines", c.baselines}}},
      {"similarity",
       {{"min_df", c.min_df},
        {"weights",
         {{"P", c.weights[0]}, {"C", c.weights[1]}, {"I", c.weights[2]}, {"R", c.weights[3]},
          {"F", c.weights[4]}, {"Lk", c.weights[5]}, {"Cmt", c.weights[6]}, {"Rp", c.weights[7]}}}}},
      {"protocol", {{"key_bits", c.key_bits}, {"scale", c.scale}, {"route", c.route}}},
      {"evaluation",
       {{"seeds", c.seeds},
        {"train_fraction", c.train_fraction},
        {"observed_per_user", c.observed_per_user},
        {"relevant_threshold", c.relevant_threshold},
        {"k_min", c.k_min},
        {"k_max", c.k_max}}},
      {"output", {{"dir", c.output_dir}}}};
}

// Digest of the effective configuration (defaults filled in).
inline std::string config_digest(const ExperimentConfig& c) {
  std::string canon = to_json(c).dump();
  std::uint64_t h = crypto::fnv1a64(
      std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(canon.data()), canon.size()));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// "section.key=value": value parsed as JSON, else taken as a string.
inline void apply_override(Json& j, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* node = &j;
  std::size_t start = 0;
  while (true) {
    auto dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
    if (!node->is_object()) *node = Json::object();
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

inline Json read_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json j = Json::parse(in, nullptr, false, true);
  if (j.is_discarded()) throw ConfigError("config file " + path.string() + " is not valid JSON");
  return j;
}

inline data::Dataset load_dataset(const ExperimentConfig& c, std::uint64_t seed) {
  if (c.dataset_kind == "synthetic") {
    data::SyntheticSpec spec = c.synthetic;
    spec.seed = seed;
    return data::generate_synthetic(spec);
  }
  return data::load_hetrec(c.dataset_path, data::parse_hetrec_kind(c.dataset_kind), c.hetrec);
}

struct ExperimentResult {
  std::string digest;
  std::vector<std::uint64_t> seeds;
  std::vector<MetricReport> clustering;                     // empty without planted labels
  std::map<std::string, std::vector<CurvePoint>> curves;    // mean over seeds
  std::vector<SeedOutcome> per_seed;
  std::vector<std::string> warnings;

  // Median over seeds of precision at k for one model.
  double median_precision(const std::string& model, int k) const {
    std::vector<double> v;
    for (const auto& s : per_seed) v.push_back(precision_at(s.curves.at(model), k));
    return summarize(v).median;
  }
};

// Per-seed clustering scores of every configured baseline on every single
// view, plus the multi-view consensus. Requires planted labels.
inline std::map<std::string, ClusterScores> clustering_scores(const data::Dataset& ds,
                                                              const ExperimentConfig& c,
                                                              std::uint64_t seed) {
  if (ds.item_truth.empty()) throw DataError("dataset has no planted labels");
  std::map<std::string, ClusterScores> out;
  nmf::MultiViewConfig cfg = c.nmf_config(ds.views.size());
  cfg.seed = seed;
  for (std::size_t s = 0; s < ds.views.size(); ++s) {
    for (const auto& name : c.baselines) {
      auto labels = baseline_cluster(ds.views[s].data, c.K, parse_baseline(name), seed, cfg);
      out[name + "/view" + std::to_string(s)] = score_clustering(labels, ds.item_truth);
    }
  }
  out["multiview"] = score_clustering(nmf::multiview_factorize(ds.views, cfg).assignment,
                                      ds.item_truth);
  return out;
}

inline ExperimentResult run_experiment(const ExperimentConfig& c,
                                       const crypto::Keypair* keys = nullptr) {
  c.validate();
  ExperimentResult r;
  r.digest = config_digest(c);
  r.seeds = c.seeds;
  std::optional<crypto::Keypair> own_keys;
  if (c.route != "plaintext" && !keys) {
    SystemRandom rng;
    own_keys = crypto::keygen(c.key_bits, rng);
    keys = &*own_keys;
  }
  std::map<std::string, std::vector<ClusterScores>> cluster_runs;
  std::optional<data::Dataset> fixed;
  std::optional<std::vector<social::UserProfile>> fixed_profiles;
  for (std::uint64_t seed : c.seeds) {
    const data::Dataset* ds;
    data::Dataset local;
    std::vector<social::UserProfile> local_profiles;
    const std::vector<social::UserProfile>* profiles;
    if (c.dataset_kind == "synthetic") {
      local = load_dataset(c, seed);
      local_profiles = social::build_profiles(local.social, c.min_df);
      ds = &local;
      profiles = &local_profiles;
    } else {
      if (!fixed) {
        fixed = load_dataset(c, seed);
        fixed_profiles = social::build_profiles(fixed->social, c.min_df);
        r.warnings = fixed->warnings;
      }
      ds = &*fixed;
      profiles = &*fixed_profiles;
    }
    if (!ds->item_truth.empty()) {
      for (auto& [name, s] : clustering_scores(*ds, c, seed)) cluster_runs[name].push_back(s);
    }
    r.per_seed.push_back(
        evaluate_recommenders(*ds, *profiles, c.recommend_settings(ds->views.size()), seed, keys));
  }
  for (const auto& [name, runs] : cluster_runs) {
    r.clustering.push_back(make_report(name, c.dataset_kind, runs));
  }
  for (const char* m : kModels) {
    std::vector<CurvePoint> mean = r.per_seed.front().curves.at(m);
    for (std::size_t i = 0; i < mean.size(); ++i) {
      double p = 0, rc = 0;
      for (const auto& s : r.per_seed) p += s.curves.at(m)[i].precision, rc += s.curves.at(m)[i].recall;
      mean[i].precision = p / r.per_seed.size();
      mean[i].recall = rc / r.per_seed.size();
    }
    r.curves[m] = std::move(mean);
  }
  return r;
}

// ---- output ------------------------------------------------------------------

inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw DataError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

inline std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline std::string stamp(const ExperimentResult& r) {
  std::string s = "# config_digest=" + r.digest + " seeds=";
  for (std::size_t i = 0; i < r.seeds.size(); ++i) s += (i ? "," : "") + std::to_string(r.seeds[i]);
  return s + "\n";
}

}  // namespace detail

inline std::string clustering_tsv(const ExperimentResult& r) {
  std::string s = detail::stamp(r);
  s += "algorithm\tdataset\taccuracy_mean\taccuracy_std\tf1_mean\tf1_std\tnmi_mean\tnmi_std\n";
  for (const auto& m : r.clustering) {
    s += m.algorithm + "\t" + m.dataset + "\t" + detail::fixed6(m.accuracy.mean) + "\t" +
         detail::fixed6(m.accuracy.stddev) + "\t" + detail::fixed6(m.f1.mean) + "\t" +
         detail::fixed6(m.f1.stddev) + "\t" + detail::fixed6(m.nmi.mean) + "\t" +
         detail::fixed6(m.nmi.stddev) + "\n";
  }
  return s;
}

inline std::string curves_tsv(const ExperimentResult& r) {
  std::string s = detail::stamp(r) + "model\tk\tprecision\trecall\n";
  for (const char* m : kModels) {
    for (const auto& p : r.curves.at(m)) {
      s += std::string(m) + "\t" + std::to_string(p.k) + "\t" + detail::fixed6(p.precision) +
           "\t" + detail::fixed6(p.recall) + "\n";
    }
  }
  return s;
}

inline std::string per_seed_tsv(const ExperimentResult& r) {
  std::string s = detail::stamp(r) + "seed\tmodel\tk\tprecision\trecall\n";
  for (const auto& o : r.per_seed) {
    for (const char* m : kModels) {
      for (const auto& p : o.curves.at(m)) {
        s += std::to_string(o.seed) + "\t" + m + "\t" + std::to_string(p.k) + "\t" +
             detail::fixed6(p.precision) + "\t" + detail::fixed6(p.recall) + "\n";
      }
    }
  }
  return s;
}

inline std::vector<std::filesystem::path> write_results(const ExperimentResult& r,
                                                        const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  if (!r.clustering.empty()) {
    write_atomically(dir / "clustering.tsv", clustering_tsv(r));
    written.push_back(dir / "clustering.tsv");
  }
  write_atomically(dir / "curves.tsv", curves_tsv(r));
  write_atomically(dir / "curves_per_seed.tsv", per_seed_tsv(r));
  written.push_back(dir / "curves.tsv");
  written.push_back(dir / "curves_per_seed.tsv");
  return written;
}

}  // namespace ppsr::eval
