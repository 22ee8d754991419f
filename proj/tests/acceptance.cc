// Copyright 2026 The hinpair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance gate. Runs criteria 1-9 (or those named on the command line)
// and prints one PASS/FAIL line per criterion. Exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hinpair/checkpoint.h"
#include "hinpair/cli.h"
#include "hinpair/cluster.h"
#include "hinpair/embed.h"
#include "hinpair/metrics.h"
#include "hinpair/synth.h"
#include "hinpair/train.h"
#include "oracles.h"
#include "primitive_checks.h"

using namespace hinpair;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Gradient integrity.

Outcome gradient_integrity() {
  const auto t0 = Clock::now();
  auto toy = toy_instance();
  std::ostringstream detail;
  double worst = 0.0;

  // Every coordinate at reduced widths, then sampled coordinates at the defaults.
  RunConfig small;
  small.d0 = 16;
  small.d = 8;
  small.d_prime = 4;
  small.d_h = 8;
  for (const RunConfig &config : {small, RunConfig{}}) {
    auto data = build_dataset(toy.records, config);
    std::vector<PairExample> pairs;
    for (const auto &name : prepare_labeled(data, toy.gold, config.attribute)) {
      for (auto &p : all_block_pairs(name)) pairs.push_back(std::move(p));
    }
    GradCheckOptions options;
    if (config.d == RunConfig{}.d) options.max_coords_per_tensor = 24;
    auto r = check_model_gradients(data, pairs, config, options);
    worst = std::max(worst, r.max_relative_error);
    detail << "model d=" << config.d << ": err " << fmt("%.2e", r.max_relative_error) << " over "
           << r.checked << " coords (" << r.skipped_kinks << " kinks); ";
  }
  double prim_worst = 0.0;
  std::string prim_name;
  for (const auto &res : oracle::check_primitives(100, 2026)) {
    if (res.max_error >= prim_worst) {
      prim_worst = res.max_error;
      prim_name = res.name;
    }
  }
  const double secs = seconds_since(t0);
  detail << "primitives x100: err " << fmt("%.2e", prim_worst) << " (" << prim_name << "); "
         << fmt("%.1f", secs) << "s";
  return {worst < 1e-3 && prim_worst < 1e-3 && secs < 60.0, detail.str()};
}

// ---------------------------------------------------------------------------
// 2. View oracle.

Outcome view_oracle() {
  const auto t0 = Clock::now();
  Rng rng(Rng::mix(42, 2));
  std::size_t mismatches = 0, edges = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto recs = oracle::random_records(rng, 1 + rng.below(200));
    auto g = build_graph(recs);
    for (const auto &path : default_meta_paths()) {
      auto view = build_view(g, path);
      auto expect = oracle::brute_force_view(recs, path);
      for (NodeId v = 0; v < recs.size(); ++v) {
        auto nb = view.neighbors(v);
        if (!std::equal(nb.begin(), nb.end(), expect[v].begin(), expect[v].end())) ++mismatches;
        edges += expect[v].size();
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 60.0,
          std::to_string(mismatches) + " mismatched adjacency lists over " + std::to_string(edges / 2) +
              " edges; " + fmt("%.1f", secs) + "s"};
}

// ---------------------------------------------------------------------------
// 3. Egonet sufficiency.

Outcome egonet_sufficiency() {
  SynthOptions so;
  so.n_authors = 60;
  so.n_names = 10;
  auto corpus = synth_generate(so);
  RunConfig config;
  auto data = build_dataset(corpus.records, config);
  const auto dims = config.model_dims();
  ParameterStore<float> store;
  Rng init(Rng::mix(42, 1));
  init_embed_params(store, dims, init);
  auto params = bind_embed_params(store, dims);

  std::size_t compared = 0, differing = 0;
  std::vector<Tensor<float>> full;
  for (std::size_t p = 0; p < data.views.size(); ++p) {
    std::vector<NodeId> all(data.views[p].num_papers());
    std::iota(all.begin(), all.end(), NodeId{0});
    auto whole = sample_egonet(data.views[p], all, 1);
    full.push_back(embed_view<float>(whole, data.graph.features(), params.layers[p], EmbedScope::kAllNodes));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(Rng::mix(seed, 3));
    std::set<NodeId> picked;
    const std::size_t count = 1 + rng.below(4);
    while (picked.size() < count) picked.insert(static_cast<NodeId>(rng.below(data.records.size())));
    std::vector<NodeId> seeds(picked.begin(), picked.end());
    for (std::size_t p = 0; p < data.views.size(); ++p) {
      auto sub = sample_egonet(data.views[p], seeds, dims.K);
      auto local = embed_view<float>(sub, data.graph.features(), params.layers[p], EmbedScope::kSeedsOnly);
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        for (std::size_t j = 0; j < dims.d; ++j) {
          ++compared;
          const float a = local.at(s, j), b = full[p].at(seeds[s], j);
          if (std::memcmp(&a, &b, sizeof a) != 0) ++differing;
        }
      }
    }
  }
  return {differing == 0 && compared > 0,
          std::to_string(differing) + " of " + std::to_string(compared) + " values differ bitwise"};
}

// ---------------------------------------------------------------------------
// 4. Attention contract.

Outcome attention_contract() {
  using Td = Tensor<double>;
  Rng rng(Rng::mix(42, 4));
  ModelDims dims;
  dims.d = 16;
  dims.d_prime = 8;
  double sum_err = 0.0, perm_err = 0.0, scale_err = 0.0;
  bool in_range = true, argmax_kept = true;
  for (int trial = 0; trial < 50; ++trial) {
    ParameterStore<double> store;
    init_embed_params(store, dims, rng);
    auto params = bind_embed_params(store, dims);
    const std::size_t n = 1 + rng.below(12), P = params.attention.size();
    std::vector<Td> z;
    for (std::size_t p = 0; p < P; ++p) {
      std::vector<double> v(n * dims.d);
      for (auto &x : v) x = rng.uniform(-2, 2);
      z.push_back(Td::constant({n, dims.d}, v));
    }
    // Random biases so the transformed vectors are generic.
    for (auto &a : params.attention) {
      for (auto &b : a.bias.mutable_values()) b = rng.uniform(-0.5, 0.5);
    }
    auto w = attention_weights<double>(z, params.attention);
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0;
      for (std::size_t p = 0; p < P; ++p) {
        const double x = w.at(i, p);
        in_range = in_range && x > 0.0 && x < 1.0;
        total += x;
      }
      sum_err = std::max(sum_err, std::abs(total - 1.0));
    }

    std::vector<std::size_t> perm(P);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span(perm));
    std::vector<Td> zp;
    std::vector<AttentionParams<double>> ap;
    for (std::size_t p : perm) {
      zp.push_back(z[p]);
      ap.push_back(params.attention[p]);
    }
    auto wp = attention_weights<double>(zp, ap);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t q = 0; q < P; ++q) perm_err = std::max(perm_err, std::abs(wp.at(i, q) - w.at(i, perm[q])));
    }

    // Scaling a_p scales the cosine's other argument; cos is symmetric.
    const std::size_t target = rng.below(P);
    const double c = std::exp(rng.uniform(-3, 3));
    std::vector<AttentionParams<double>> scaled = params.attention;
    scaled[target].preference = scale(params.attention[target].preference, c);
    auto ws = attention_weights<double>(z, scaled);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t am = 0, ams = 0;
      for (std::size_t p = 0; p < P; ++p) {
        scale_err = std::max(scale_err, std::abs(ws.at(i, p) - w.at(i, p)));
        if (w.at(i, p) > w.at(i, am)) am = p;
        if (ws.at(i, p) > ws.at(i, ams)) ams = p;
      }
      argmax_kept = argmax_kept && am == ams;
    }
  }
  // The epsilon guard in the cosine norms perturbs scaled values at the 1e-12 level.
  const bool pass = sum_err <= 1e-6 && in_range && perm_err <= 1e-12 && scale_err <= 1e-9 && argmax_kept;
  return {pass, "sum err " + fmt("%.1e", sum_err) + ", in (0,1) " + (in_range ? "yes" : "no") +
                    ", permutation err " + fmt("%.1e", perm_err) + ", scaling err " +
                    fmt("%.1e", scale_err) + ", argmax kept " + (argmax_kept ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 5. Metric oracles.

Outcome metric_oracles() {
  Rng rng(Rng::mix(42, 5));
  double worst = 0.0;
  bool auc_presence = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<std::size_t> pred(n);
    std::vector<std::string> gold(n);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    const std::size_t k_pred = 1 + rng.below(n), k_gold = 1 + rng.below(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = rng.below(k_pred);
      gold[i] = "a" + std::to_string(rng.below(k_gold));
      scores[i] = trial % 2 ? rng.uniform() : std::round(rng.uniform() * 8) / 8;
      labels[i] = static_cast<int>(rng.below(2));
    }
    auto m = pairwise_metrics(pred, gold);
    auto o = oracle::brute_force_pairwise(pred, gold);
    worst = std::max({worst, std::abs(m.precision - o.precision), std::abs(m.recall - o.recall),
                      std::abs(m.f1 - o.f1)});
    auto auc = roc_auc(scores, labels);
    const bool both = std::count(labels.begin(), labels.end(), 0) > 0 &&
                      std::count(labels.begin(), labels.end(), 1) > 0;
    auc_presence = auc_presence && auc.has_value() == both;
    if (auc && both) worst = std::max(worst, std::abs(*auc - oracle::brute_force_auc(scores, labels)));
  }
  return {worst <= 1e-12 && auc_presence,
          "max deviation " + fmt("%.1e", worst) + ", AUC absent exactly for single-class sets " +
              (auc_presence ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 6 and 9. Synthetic end-to-end benchmark, shared by both criteria.

struct Benchmark {
  double pairnet_f1 = 0, pairnet_auc = 0, baseline_f1 = 0, baseline_auc = 0;
  std::size_t test_pairs = 0, test_names = 0;
  double pairnet_seconds = 0, total_seconds = 0;
  MergeRate merge, held_out_merge;
};

const Benchmark &benchmark() {
  static std::optional<Benchmark> cached;
  if (cached) return *cached;
  const auto t0 = Clock::now();
  Benchmark b;
  SynthOptions so;
  so.n_authors = 200;
  so.n_names = 30;
  so.attr_change_prob = 0.6;
  so.seed = 42;
  const auto corpus = synth_generate(so);
  const RunConfig config;
  const auto data = build_dataset(corpus.records, config);
  const auto names = prepare_labeled(data, corpus.gold, config.attribute);

  // Held-out names never reach training or validation.
  auto [rest, test] = split_names(names.size(), 0.2, Rng::mix(42, 100));
  std::vector<LabeledBlocks> rest_names, test_names;
  for (auto i : rest) rest_names.push_back(names[i]);
  for (auto i : test) test_names.push_back(names[i]);
  const auto test_sample = sample_training_pairs(test_names, config.neg_ratio, Rng::mix(42, 101));
  b.test_pairs = test_sample.pairs.size();
  b.test_names = test_names.size();

  for (auto kind : {ModelKind::kPairNet, ModelKind::kFeatureBaseline}) {
    const auto t_model = Clock::now();
    auto run = train_pipeline(kind, data, rest_names, config);
    auto model = make_model(kind, data, config, run.params);
    auto ev = evaluate_pairs(*model, test_sample.pairs, static_cast<std::size_t>(config.batch_size));
    auto m = classification_metrics(ev.scores, ev.labels, config.tau);
    if (kind == ModelKind::kPairNet) {
      b.pairnet_f1 = m.f1;
      b.pairnet_auc = m.auc.value_or(-1);
      std::vector<NameClustering> all, held;
      for (const auto &n : names) all.push_back(disambiguate(*model, n.candidates.name, n.blocks, config.tau));
      for (auto i : test) held.push_back(all[i]);
      b.merge = split_author_merge_rate(all, names);
      b.held_out_merge = split_author_merge_rate(held, test_names);
      b.pairnet_seconds = seconds_since(t_model);
    } else {
      b.baseline_f1 = m.f1;
      b.baseline_auc = m.auc.value_or(-1);
    }
  }
  b.total_seconds = seconds_since(t0);
  cached = b;
  return *cached;
}

Outcome synthetic_end_to_end() {
  const auto &b = benchmark();
  const double gap = b.pairnet_f1 - b.baseline_f1;
  const bool pass = b.pairnet_f1 >= 0.90 && gap >= 0.05 && b.pairnet_seconds < 600.0;
  return {pass, "test F1 " + fmt("%.4f", b.pairnet_f1) + " (AUC " + fmt("%.4f", b.pairnet_auc) +
                    "), baseline F1 " + fmt("%.4f", b.baseline_f1) + " (AUC " +
                    fmt("%.4f", b.baseline_auc) + "), gap " + fmt("%+.4f", gap) + ", " +
                    std::to_string(b.test_pairs) + " pairs over " + std::to_string(b.test_names) +
                    " held-out names; need F1 >= 0.90 and gap >= 0.05; " +
                    fmt("%.1f", b.pairnet_seconds) + "s"};
}

Outcome attribute_change_merge() {
  const auto &b = benchmark();
  const double rate = b.merge.rate();
  return {b.merge.split_authors > 0 && rate >= 0.8,
          "merged " + std::to_string(b.merge.merged_authors) + " of " +
              std::to_string(b.merge.split_authors) + " split authors, rate " + fmt("%.4f", rate) +
              " (held-out names: " + std::to_string(b.held_out_merge.merged_authors) + "/" +
              std::to_string(b.held_out_merge.split_authors) + ")"};
}

// ---------------------------------------------------------------------------
// 7. Loss structure.

Outcome loss_structure() {
  SynthOptions so;
  so.seed = 42;
  const auto corpus = synth_generate(so);
  RunConfig base;
  const auto data = build_dataset(corpus.records, base);
  const auto names = prepare_labeled(data, corpus.gold, base.attribute);
  std::ostringstream detail;
  bool pass = true;

  // Identical batches through the eta = 0 model: total equals cross-entropy, and
  // so do the gradients.
  RunConfig zero = base;
  zero.eta = 0.0;
  zero.dropout = 0.0;
  const auto sample = sample_training_pairs(names, 1, 7);
  const std::span<const PairExample> batch(sample.pairs.data(), std::min<std::size_t>(16, sample.pairs.size()));
  auto store = init_model(ModelKind::kPairNet, zero);
  auto ce_store = store.clone();
  const PairModel<float> model(data, zero.model_dims(), zero.l, LossSettings::from(zero), store);
  const PairModel<float> ce_model(data, zero.model_dims(), zero.l, LossSettings::from(zero), ce_store);
  auto out = model.forward(batch, false, nullptr);
  auto ce_out = ce_model.forward(batch, false, nullptr);
  const float total = out.loss.item(), ce = ce_out.classify.item();
  backward(out.loss);
  backward(ce_out.classify);
  bool grads_equal = true;
  for (std::size_t t = 0; t < store.size(); ++t) {
    auto g1 = store.tensors()[t].grad(), g2 = ce_store.tensors()[t].grad();
    grads_equal = grads_equal && std::memcmp(g1.data(), g2.data(), g1.size() * sizeof(float)) == 0;
  }
  const bool loss_equal = std::memcmp(&total, &ce, sizeof total) == 0;
  pass = pass && loss_equal && grads_equal;
  detail << "batch loss == CE bitwise " << (loss_equal ? "yes" : "no") << ", gradients "
         << (grads_equal ? "yes" : "no") << "; ";

  // Whole training runs: eta = 0 against backpropagating CE alone.
  RunConfig short_run = base;
  short_run.eta = 0.0;
  short_run.epochs = 5;
  auto eta_run = train_pipeline(ModelKind::kPairNet, data, names, short_run);
  TrainOptions ce_only;
  ce_only.ce_only = true;
  auto ce_run = train_pipeline(ModelKind::kPairNet, data, names, short_run, ce_only);
  bool logs_ce = true;
  for (const auto &e : eta_run.result.log) logs_ce = logs_ce && e.loss == e.classify;
  const bool same_params = eta_run.params.bitwise_equal(ce_run.params);
  pass = pass && same_params && logs_ce;
  detail << "5-epoch runs identical " << (same_params ? "yes" : "no") << ", log loss == CE "
         << (logs_ce ? "yes" : "no") << "; sweep";

  for (double eta : {0.0, 0.5, 1.0, 2.0}) {
    RunConfig c = base;
    c.eta = eta;
    try {
      auto run = train_pipeline(ModelKind::kPairNet, data, names, c);
      const auto &last = run.result.log.back();
      const bool finite = std::isfinite(last.loss);
      pass = pass && finite;
      detail << " eta=" << eta << ":" << run.result.log.size() << "ep/loss " << fmt("%.3f", last.loss)
             << "/valF1 " << fmt("%.3f", run.result.log[run.result.best_epoch - 1].val_f1);
    } catch (const std::exception &e) {
      pass = false;
      detail << " eta=" << eta << ": " << e.what();
    }
  }
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// 8. Determinism.

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "hinpair_acceptance_determinism";
  fs::remove_all(root);
  auto cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "hinpair");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  auto slurp = [](const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::vector<std::vector<std::string>> artifacts;
  for (int r = 0; r < 2; ++r) {
    const fs::path dir = root / std::to_string(r);
    fs::create_directories(dir);
    const std::string corpus = (dir / "corpus.jsonl").string(), gold = (dir / "gold.jsonl").string();
    const std::string ckpt = (dir / "model.ckpt").string();
    int code = cli({"synth", "--attr-change-prob", "0.6", "--seed", "42", "--out", corpus, "--gold", gold});
    code |= cli({"train", "--corpus", corpus, "--gold", gold, "--checkpoint", ckpt, "--seed", "42"});
    code |= cli({"disambiguate", "--corpus", corpus, "--gold", gold, "--checkpoint", ckpt, "--out",
                 (dir / "clusters.json").string()});
    code |= cli({"eval", "--corpus", corpus, "--gold", gold, "--checkpoint", ckpt, "--out",
                 (dir / "report.json").string()});
    if (code != 0) {
      fs::remove_all(root);
      return {false, "pipeline run " + std::to_string(r) + " failed"};
    }
    artifacts.push_back({slurp(dir / "corpus.jsonl"), slurp(ckpt), slurp(dir / "clusters.json"),
                         slurp(dir / "report.json")});
  }
  fs::remove_all(root);
  const char *labels[] = {"corpus", "checkpoint", "clustering", "report"};
  std::string detail;
  bool pass = true;
  for (std::size_t i = 0; i < 4; ++i) {
    const bool same = artifacts[0][i] == artifacts[1][i] && !artifacts[0][i].empty();
    pass = pass && same;
    detail += std::string(i ? ", " : "") + labels[i] + " " + (same ? "identical" : "DIFFERENT") + " (" +
              std::to_string(artifacts[0][i].size()) + " bytes)";
  }
  return {pass, detail};
}

struct Criterion {
  int id;
  const char *name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
  const std::vector<Criterion> criteria = {
      {1, "gradient integrity", gradient_integrity},
      {2, "view oracle", view_oracle},
      {3, "egonet sufficiency", egonet_sufficiency},
      {4, "attention contract", attention_contract},
      {5, "metric oracles", metric_oracles},
      {6, "synthetic end-to-end", synthetic_end_to_end},
      {7, "loss structure", loss_structure},
      {8, "determinism", determinism},
      {9, "attribute-change merge", attribute_change_merge},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto &c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
