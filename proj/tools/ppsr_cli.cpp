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

// Command-line driver: clustering, similarity, key generation, the two-party
// recommendation protocol and the full evaluation harness.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppsr/ppsr.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ppsr;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string dataset;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--set", overrides, "override a config key, e.g. clustering.K=4")
        ->take_all();
    app->add_option("-d,--dataset", dataset, "dataset dump (overrides the config dataset)");
    app->add_option("-s,--seed", seed, "seed (default: first configured seed)");
  }

  eval::ExperimentConfig config() const {
    eval::Json j = config_path.empty() ? eval::Json::object()
                                       : eval::read_config_json(config_path);
    for (const auto& o : overrides) eval::apply_override(j, o);
    eval::ExperimentConfig c = eval::parse_config(j);
    c.validate();
    return c;
  }

  std::uint64_t seed_for(const eval::ExperimentConfig& c) const {
    return seed ? *seed : c.seeds.front();
  }

  data::Dataset load(const eval::ExperimentConfig& c) const {
    data::Dataset ds = dataset.empty() ? eval::load_dataset(c, seed_for(c))
                                       : data::read_dump(dataset);
    for (const auto& w : ds.warnings) std::cerr << "warning: " << w << "\n";
    return ds;
  }
};

void print_scores(const std::string& name, const eval::ClusterScores& s) {
  std::printf("%-16s acc=%.4f f1=%.4f nmi=%.4f\n", name.c_str(), s.accuracy, s.f1, s.nmi);
}

int cmd_cluster(const Common& common, const std::string& model_out) {
  auto c = common.config();
  auto ds = common.load(c);
  nmf::MultiViewConfig cfg = c.nmf_config(ds.views.size());
  cfg.seed = common.seed_for(c);
  nmf::FactorModel model = nmf::multiview_factorize(ds.views, cfg);
  std::printf("items=%lld views=%zu K=%d iterations=%d converged=%s objective=%.6g\n",
              static_cast<long long>(model.items()), model.views(), model.K, model.iterations,
              model.converged ? "yes" : "no", model.objective_trace.back());
  if (!ds.item_truth.empty()) print_scores("multiview", eval::score_clustering(model.assignment, ds.item_truth));
  if (!model_out.empty()) {
    std::ostringstream os;
    nmf::save_model(os, model);
    eval::write_atomically(model_out, os.str());
  }
  return 0;
}

int cmd_baselines(const Common& common) {
  auto c = common.config();
  auto ds = common.load(c);
  for (const auto& [name, s] : eval::clustering_scores(ds, c, common.seed_for(c))) {
    print_scores(name, s);
  }
  return 0;
}

int cmd_similarity(const Common& common, std::optional<std::uint32_t> user) {
  auto c = common.config();
  auto ds = common.load(c);
  auto profiles = social::build_profiles(ds.social, c.min_df);
  auto weights = c.similarity_weights();
  std::printf("user\tother\tsimilarity\n");
  for (std::uint32_t u = 0; u < profiles.size(); ++u) {
    if (user && *user != u) continue;
    for (const auto& [v, sim] : social::similarity_table(u, profiles, weights)) {
      std::printf("%u\t%u\t%.6f\n", u, v, sim);
    }
  }
  if (user && *user >= profiles.size()) throw DataError("unknown user " + std::to_string(*user));
  return 0;
}

int cmd_keygen(const Common& common, std::optional<std::size_t> bits, const std::string& out) {
  auto c = common.config();
  SystemRandom rng;
  crypto::Keypair keys = crypto::keygen(static_cast<unsigned>(bits.value_or(c.key_bits)), rng);
  eval::write_atomically(out, crypto::format_secret_key(keys));
  eval::write_atomically(out + ".pub", crypto::format_public_key(keys.public_key()));
  std::printf("wrote %s and %s.pub (%u-bit modulus, key id %016llx)\n", out.c_str(),
              out.c_str(), keys.public_key().bits(),
              static_cast<unsigned long long>(keys.public_key().key_id()));
  return 0;
}

int cmd_recommend(const Common& common, std::uint32_t user, const std::string& transport,
                  const std::string& key_path, int top_k) {
  auto c = common.config();
  auto route = eval::parse_route(transport);
  if (route == eval::Route::kPlaintext) throw ConfigError("--transport must be inproc or socket");
  if (top_k <= 0) throw ConfigError("--top-k must be positive");
  auto ds = common.load(c);
  if (user >= ds.n_users()) throw DataError("unknown user " + std::to_string(user));
  SystemRandom rng;
  crypto::Keypair keys = key_path.empty()
                             ? crypto::keygen(static_cast<unsigned>(c.key_bits), rng)
                             : crypto::load_secret_key(key_path);

  std::vector<protocol::ItemId> rated, unrated;
  for (std::size_t i = 0; i < ds.n_items(); ++i) {
    (ds.ratings.at(user, i) > 0 ? rated : unrated).push_back(static_cast<protocol::ItemId>(i));
  }
  if (unrated.empty()) throw DataError("user has rated every item");

  auto profiles = social::build_profiles(ds.social, c.min_df);
  auto table = social::similarity_table(user, profiles, c.similarity_weights());
  crypto::FixedPointCodec codec(c.scale);
  protocol::AliceOptions opts;
  opts.codec = codec;
  opts.items = unrated;
  protocol::AliceParty alice(ds.ratings, opts);
  protocol::BobParty bob(keys, [&](protocol::UserId) { return table; }, codec);
  protocol::Channel ch = route == eval::Route::kSocket ? protocol::make_loopback_socket_channel()
                                                       : protocol::make_in_process_channel();
  protocol::ProtocolResult r = protocol::run_protocol(alice, bob, user, ch);
  auto violations = protocol::validate_transcript(r.transcript);
  for (const auto& v : violations) std::cerr << "transcript: " << v << "\n";
  if (!violations.empty()) throw ProtocolError("transcript validation failed");

  nmf::MultiViewConfig cfg = c.nmf_config(ds.views.size());
  cfg.seed = common.seed_for(c);
  auto assignment = nmf::multiview_factorize(ds.views, cfg).assignment;
  auto popularity = eval::popularity_rank(ds.ratings, c.relevant_threshold);
  auto clustered = eval::clustering_list(assignment, rated, ds.ratings, user,
                                         c.relevant_threshold, popularity);
  auto merged = r.degenerate ? clustered : protocol::merge_lists(r.list, clustered, top_k);
  if (merged.items.size() > static_cast<std::size_t>(top_k)) merged.items.resize(top_k);

  std::printf("# user=%u transport=%s messages=%zu transcript=valid socialized=%s\n", user,
              transport.c_str(), r.transcript.entries().size(), r.degenerate ? "no" : "yes");
  std::printf("rank\titem\n");
  for (std::size_t i = 0; i < merged.items.size(); ++i) {
    auto id = merged.items[i];
    std::printf("%zu\t%lld\n", i + 1, static_cast<long long>(ds.item_ids[id]));
  }
  return 0;
}

int cmd_eval(const Common& common, const std::string& key_path, const std::string& out_dir) {
  auto c = common.config();
  if (!common.dataset.empty()) throw ConfigError("eval reads its dataset from the config");
  if (common.seed) c.seeds = {*common.seed};
  std::optional<crypto::Keypair> keys;
  if (!key_path.empty()) keys = crypto::load_secret_key(key_path);
  auto r = eval::run_experiment(c, keys ? &*keys : nullptr);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& m : r.clustering) {
    std::printf("%-16s acc=%.4f+-%.4f f1=%.4f+-%.4f nmi=%.4f+-%.4f\n", m.algorithm.c_str(),
                m.accuracy.mean, m.accuracy.stddev, m.f1.mean, m.f1.stddev, m.nmi.mean,
                m.nmi.stddev);
  }
  for (const char* m : eval::kModels) {
    std::printf("%-8s median p@5=%.4f\n", m, r.median_precision(m, 5));
  }
  for (const auto& p : eval::write_results(r, out_dir.empty() ? c.output_dir : out_dir)) {
    std::printf("wrote %s\n", p.string().c_str());
  }
  return 0;
}

int cmd_synth(const Common& common, const std::string& out) {
  auto c = common.config();
  if (c.dataset_kind != "synthetic") throw ConfigError("synth needs dataset.kind=synthetic");
  data::SyntheticSpec spec = c.synthetic;
  spec.seed = common.seed_for(c);
  eval::write_atomically(out, data::dump_to_string(data::generate_synthetic(spec)));
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving socialized recommendation toolkit"};
  app.require_subcommand(1);
  Common common;

  std::string model_out, key_out = "ppsr.key", key_path, transport = "inproc", out_dir,
                         synth_out = "synthetic.dump";
  std::optional<std::uint32_t> sim_user;
  std::uint32_t rec_user = 0;
  std::optional<std::size_t> bits;
  int top_k = 10;

  auto* cluster = app.add_subcommand("cluster", "multi-view clustering and metrics");
  common.attach(cluster);
  cluster->add_option("--save-model", model_out, "write the factor model here");

  auto* baselines = app.add_subcommand("baselines", "baseline vs multi-view clustering table");
  common.attach(baselines);

  auto* similarity = app.add_subcommand("similarity", "social similarity tables");
  common.attach(similarity);
  similarity->add_option("-u,--user", sim_user, "only this target user");

  auto* keygen = app.add_subcommand("keygen", "generate a Paillier keypair");
  common.attach(keygen);
  keygen->add_option("--bits", bits, "modulus size (default protocol.key_bits)");
  keygen->add_option("-o,--out", key_out, "secret key path; the public key gets .pub")
      ->capture_default_str();

  auto* recommend = app.add_subcommand("recommend", "run the two-party protocol for one user");
  common.attach(recommend);
  recommend->add_option("-u,--user", rec_user, "target user index")->required();
  recommend->add_option("-t,--transport", transport, "inproc or socket")
      ->check(CLI::IsMember({"inproc", "socket"}))
      ->capture_default_str();
  recommend->add_option("-k,--key", key_path, "secret key file (default: fresh key)");
  recommend->add_option("--top-k", top_k, "list length")->capture_default_str();

  auto* evaluate = app.add_subcommand("eval", "full recommendation experiment");
  common.attach(evaluate);
  evaluate->add_option("-k,--key", key_path, "secret key for protocol routes");
  evaluate->add_option("-o,--out", out_dir, "output directory (default output.dir)");

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset dump");
  common.attach(synth);
  synth->add_option("-o,--out", synth_out, "output path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*cluster) return cmd_cluster(common, model_out);
    if (*baselines) return cmd_baselines(common);
    if (*similarity) return cmd_similarity(common, sim_user);
    if (*keygen) return cmd_keygen(common, bits, key_out);
    if (*recommend) return cmd_recommend(common, rec_user, transport, key_path, top_k);
    if (*evaluate) return cmd_eval(common, key_path, out_dir);
    if (*synth) return cmd_synth(common, synth_out);
  } catch (const ppsr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
