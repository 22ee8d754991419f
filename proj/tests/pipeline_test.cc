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


#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <doctest.h>

#include "hinpair/cluster.h"
#include "hinpair/dataset.h"
#include "hinpair/errors.h"
#include "hinpair/metrics.h"
#include "hinpair/synth.h"
#include "hinpair/train.h"
#include "oracles.h"

using namespace hinpair;

namespace {

PaperRecord authored(std::string id, int year, std::string name, std::optional<std::string> email,
                     std::vector<std::string> coauthors = {}) {
  PaperRecord r;
  r.paper_id = std::move(id);
  r.title = "paper " + r.paper_id;
  r.year = year;
  r.authors.push_back({std::move(name), std::move(email), std::nullopt});
  for (auto &c : coauthors) r.authors.push_back({std::move(c), std::nullopt, std::nullopt});
  return r;
}

NameCandidateSet all_papers(std::string name, std::size_t n) {
  NameCandidateSet c;
  c.name = std::move(name);
  c.papers.resize(n);
  std::iota(c.papers.begin(), c.papers.end(), NodeId{0});
  return c;
}

std::vector<std::size_t> sizes(const std::vector<Block> &blocks) {
  std::vector<std::size_t> out;
  for (const auto &b : blocks) out.push_back(b.sequence.items.size());
  std::sort(out.begin(), out.end());
  return out;
}

// One name whose blocks belong to the given authors.
LabeledBlocks labeled(std::string name, std::vector<std::string> authors) {
  LabeledBlocks lb;
  lb.candidates.name = name;
  for (std::size_t i = 0; i < authors.size(); ++i) {
    Block b;
    b.block_id = name + "#" + std::to_string(i);
    b.sequence.block_id = b.block_id;
    b.sequence.items.push_back({static_cast<NodeId>(i), 2000 + int(i), "p" + std::to_string(i)});
    lb.blocks.push_back(std::move(b));
  }
  lb.authors = std::move(authors);
  return lb;
}

std::size_t count_clusters(const std::vector<std::size_t> &labels) {
  return std::set<std::size_t>(labels.begin(), labels.end()).size();
}

// Scores pairs by a fixed function of the two block ids.
class FixedScores : public PairClassifier<float> {
 public:
  explicit FixedScores(std::map<std::pair<std::string, std::string>, double> s) : s_(std::move(s)) {}
  BatchOutput<float> forward(std::span<const PairExample> pairs, bool, Rng *) const override {
    BatchOutput<float> out;
    for (const auto &p : pairs) {
      auto a = p.first.block_id, b = p.second.block_id;
      if (b < a) std::swap(a, b);
      auto it = s_.find({a, b});
      out.scores.push_back(it == s_.end() ? 0.0 : it->second);
    }
    return out;
  }

 private:
  std::map<std::pair<std::string, std::string>, double> s_;
};

}  // namespace

TEST_CASE("block_by_attribute examples") {
  std::vector<PaperRecord> recs = {authored("p1", 2001, "Wei Wang", "a@x"),
                                   authored("p2", 2002, "Wei Wang", " A@x "),
                                   authored("p3", 2003, "Wei Wang", "b@y")};
  auto blocks = block_by_attribute(all_papers("wei wang", 3), recs, BlockAttribute::kEmail);
  CHECK(sizes(blocks) == std::vector<std::size_t>{1, 2});
  CHECK(blocks[0].attribute == "a@x");
  CHECK(blocks[0].block_id == "wei wang#0");

  std::vector<PaperRecord> bare = {authored("p1", 2001, "Wei Wang", std::nullopt),
                                   authored("p2", 2001, "Wei Wang", std::nullopt)};
  auto singles = block_by_attribute(all_papers("wei wang", 2), bare, BlockAttribute::kEmail);
  CHECK(sizes(singles) == std::vector<std::size_t>{1, 1});

  std::vector<PaperRecord> moved = {authored("p1", 2001, "Li Na", "ln@a.edu"),
                                    authored("p2", 2004, "Li Na", "ln@a.edu"),
                                    authored("p3", 2006, "Li Na", "ln@b.ca"),
                                    authored("p4", 2009, "Li Na", "ln@b.ca")};
  auto split = block_by_attribute(all_papers("li na", 4), moved, BlockAttribute::kEmail);
  REQUIRE(split.size() == 2);
  CHECK(split[0].sequence.items.front().paper_id == "p1");
  CHECK(split[1].sequence.items.front().paper_id == "p3");
}

TEST_CASE("blocks partition the papers and are ordered by year then id") {
  auto corpus = synth_generate({40, 6, 4, 10, 0.6, 5});
  RunConfig config;
  config.d0 = 16;
  auto data = build_dataset(corpus.records, config);
  for (const auto &cands : candidates_from_gold(data, corpus.gold)) {
    auto blocks = block_by_attribute(cands, data.records, BlockAttribute::kEmail);
    std::vector<NodeId> seen;
    for (const auto &b : blocks) {
      const auto &items = b.sequence.items;
      for (std::size_t i = 0; i < items.size(); ++i) {
        seen.push_back(items[i].paper);
        if (i > 0) {
          CHECK(std::tie(items[i - 1].year, items[i - 1].paper_id) <
                std::tie(items[i].year, items[i].paper_id));
        }
      }
    }
    std::sort(seen.begin(), seen.end());
    CHECK(seen == cands.papers);
  }
}

TEST_CASE("synthetic blocks never mix authors") {
  auto corpus = synth_generate({60, 10, 4, 12, 0.6, 8});
  RunConfig config;
  config.d0 = 16;
  auto data = build_dataset(corpus.records, config);
  for (const auto &cands : candidates_from_gold(data, corpus.gold)) {
    std::map<NodeId, std::string> author_of;
    for (std::size_t i = 0; i < cands.papers.size(); ++i) author_of[cands.papers[i]] = cands.gold[i];
    for (const auto &b : block_by_attribute(cands, data.records, BlockAttribute::kEmail)) {
      std::set<std::string> authors;
      for (const auto &item : b.sequence.items) authors.insert(author_of.at(item.paper));
      CHECK(authors.size() == 1);
    }
  }
}

TEST_CASE("sample_training_pairs examples") {
  std::vector<LabeledBlocks> one = {labeled("n", {"a", "a", "a"})};
  auto s = sample_training_pairs(one, 1, 3);
  CHECK(s.positives == 3);
  CHECK(s.negatives == 0);

  std::vector<LabeledBlocks> two = {labeled("n", {"a", "a", "b"})};
  auto t = sample_training_pairs(two, 1, 3);
  CHECK(t.positives == 1);
  CHECK(t.negatives == 1);
  REQUIRE(t.pairs.size() == 2);
  CHECK(t.pairs[0].label == 1);
  CHECK(t.pairs[1].label == 0);

  std::vector<LabeledBlocks> none = {labeled("n", {"a", "b", "c"})};
  auto u = sample_training_pairs(none, 1, 3);
  CHECK(u.no_positives);
  CHECK(u.negatives == 3);
}

TEST_CASE("sample_training_pairs is deterministic and capped") {
  std::vector<LabeledBlocks> names = {labeled("n", {"a", "a", "b", "c", "c", "d"}),
                                      labeled("m", {"x", "y", "x", "z"})};
  auto a = sample_training_pairs(names, 2, 11);
  auto b = sample_training_pairs(names, 2, 11);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].first.block_id == b.pairs[i].first.block_id);
    CHECK(a.pairs[i].second.block_id == b.pairs[i].second.block_id);
  }
  CHECK(a.positives == 3);
  CHECK(a.negatives == 6);
  auto capped = sample_training_pairs(names, 100, 11);
  CHECK(capped.negatives == 13 + 5);
}

TEST_CASE("split_names holds out at least one name") {
  auto [train, val] = split_names(10, 0.1, 4);
  CHECK(train.size() == 9);
  CHECK(val.size() == 1);
  auto [t2, v2] = split_names(2, 0.1, 4);
  CHECK(t2.size() == 1);
  CHECK(v2.size() == 1);
  auto [t1, v1] = split_names(1, 0.1, 4);
  CHECK(t1.size() == 1);
  CHECK(v1.empty());
  std::vector<std::size_t> all = train;
  all.insert(all.end(), val.begin(), val.end());
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(split_names(10, 0.1, 4) == split_names(10, 0.1, 4));
}

TEST_CASE("pairwise_metrics examples") {
  const std::vector<std::string> gold = {"a", "a", "c"};
  auto merged = pairwise_metrics(std::vector<std::size_t>{0, 0, 0}, gold);
  CHECK(merged.precision == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(merged.recall == 1.0);
  CHECK(merged.f1 == doctest::Approx(0.5).epsilon(1e-12));
  auto exact = pairwise_metrics(std::vector<std::size_t>{0, 0, 1}, gold);
  CHECK(exact.precision == 1.0);
  CHECK(exact.recall == 1.0);
  CHECK(exact.f1 == 1.0);
  auto singles = pairwise_metrics(std::vector<std::size_t>{0, 1, 2}, gold);
  CHECK(singles.precision == 1.0);
  CHECK(singles.recall == 0.0);
  CHECK(singles.f1 == 0.0);
  CHECK_THROWS_AS(pairwise_metrics(std::vector<std::size_t>{0, 1}, gold), ContractError);
}

TEST_CASE("classification_metrics examples") {
  CHECK(*roc_auc(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0}) == 1.0);
  CHECK(*roc_auc(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}) == 0.5);
  CHECK(*roc_auc(std::vector<double>{0.9, 0.8, 0.2}, std::vector<int>{1, 0, 1}) == 0.5);
  CHECK_FALSE(roc_auc(std::vector<double>{0.9, 0.8}, std::vector<int>{1, 1}).has_value());
  auto m = classification_metrics(std::vector<double>{0.9, 0.6, 0.2, 0.4}, std::vector<int>{1, 0, 0, 1});
  CHECK(m.accuracy == 0.5);
  CHECK(m.f1 == 0.5);
  CHECK(m.count == 4);
  CHECK(binary_f1(0, 0, 0) == 1.0);
}

TEST_CASE("metrics agree with brute-force enumeration") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<std::size_t> pred(n);
    std::vector<std::string> gold(n);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = rng.below(1 + n / 3);
      gold[i] = "g" + std::to_string(rng.below(1 + n / 4));
      scores[i] = std::round(rng.uniform() * 10) / 10;  // forces ties
      labels[i] = static_cast<int>(rng.below(2));
    }
    auto m = pairwise_metrics(pred, gold);
    auto o = oracle::brute_force_pairwise(pred, gold);
    CHECK(std::abs(m.precision - o.precision) <= 1e-12);
    CHECK(std::abs(m.recall - o.recall) <= 1e-12);
    CHECK(std::abs(m.f1 - o.f1) <= 1e-12);
    auto auc = roc_auc(scores, labels);
    const bool both = std::count(labels.begin(), labels.end(), 1) > 0 &&
                      std::count(labels.begin(), labels.end(), 0) > 0;
    REQUIRE(auc.has_value() == both);
    if (both) CHECK(std::abs(*auc - oracle::brute_force_auc(scores, labels)) <= 1e-12);
  }
}

TEST_CASE("merge_blocks examples") {
  using P = std::pair<std::size_t, std::size_t>;
  CHECK(merge_blocks(3, std::vector<P>{{0, 1}, {1, 2}}) == std::vector<std::size_t>{0, 0, 0});
  CHECK(merge_blocks(3, std::vector<P>{}) == std::vector<std::size_t>{0, 1, 2});
  CHECK(merge_blocks(4, std::vector<P>{{0, 1}}) == std::vector<std::size_t>{0, 0, 1, 2});
}

TEST_CASE("merge_blocks depends only on the set of positives") {
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(12);
    std::vector<std::pair<std::size_t, std::size_t>> pos;
    for (std::size_t k = 0; k < rng.below(n); ++k) pos.push_back({rng.below(n), rng.below(n)});
    auto a = merge_blocks(n, pos);
    rng.shuffle(std::span(pos));
    for (auto &p : pos) std::swap(p.first, p.second);
    CHECK(merge_blocks(n, pos) == a);
    // Every positive pair shares a cluster.
    for (auto [x, y] : pos) CHECK(a[x] == a[y]);
  }
}

TEST_CASE("raising tau only splits clusters") {
  auto lb = labeled("n", {"a", "b", "c", "d", "e"});
  std::map<std::pair<std::string, std::string>, double> scores;
  Rng rng(15);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) scores[{lb.blocks[i].block_id, lb.blocks[j].block_id}] = rng.uniform();
  }
  FixedScores model(scores);
  std::vector<std::size_t> prev;
  std::size_t prev_positive = 11;
  for (double tau : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    auto c = disambiguate(model, "n", lb.blocks, tau);
    CHECK(c.pairs.size() == 10);
    const auto positive = static_cast<std::size_t>(
        std::count_if(c.pairs.begin(), c.pairs.end(), [](const ScoredPair &p) { return p.positive; }));
    CHECK(positive <= prev_positive);
    prev_positive = positive;
    if (!prev.empty()) {
      CHECK(count_clusters(c.cluster_of_block) >= count_clusters(prev));
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
          if (c.cluster_of_block[i] == c.cluster_of_block[j]) CHECK(prev[i] == prev[j]);
        }
      }
    }
    prev = c.cluster_of_block;
  }
  CHECK(count_clusters(prev) == 5);
}

TEST_CASE("shuffling block order yields the same partition") {
  auto lb = labeled("n", {"a", "b", "c", "d", "e", "f"});
  std::map<std::pair<std::string, std::string>, double> scores;
  Rng rng(16);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) scores[{lb.blocks[i].block_id, lb.blocks[j].block_id}] = rng.uniform();
  }
  FixedScores model(scores);
  auto partition = [](const NameClustering &c) {
    std::map<std::size_t, std::set<std::string>> groups;
    for (std::size_t i = 0; i < c.blocks.size(); ++i) groups[c.cluster_of_block[i]].insert(c.blocks[i].block_id);
    std::set<std::set<std::string>> out;
    for (auto &[k, g] : groups) out.insert(g);
    return out;
  };
  const auto base = partition(disambiguate(model, "n", lb.blocks, 0.6));
  for (int trial = 0; trial < 10; ++trial) {
    auto blocks = lb.blocks;
    rng.shuffle(std::span(blocks));
    CHECK(partition(disambiguate(model, "n", blocks, 0.6)) == base);
  }
}

TEST_CASE("synth_generate examples") {
  SUBCASE("no attribute change gives one block per author") {
    auto corpus = synth_generate({30, 5, 4, 8, 0.0, 1});
    RunConfig config;
    config.d0 = 16;
    auto data = build_dataset(corpus.records, config);
    std::map<std::string, std::size_t> blocks_per_author;
    for (const auto &name : prepare_labeled(data, corpus.gold, BlockAttribute::kEmail)) {
      for (const auto &a : name.authors) ++blocks_per_author[a];
    }
    CHECK(!blocks_per_author.empty());
    for (const auto &[author, n] : blocks_per_author) CHECK(n == 1);
  }
  SUBCASE("certain change splits every multi-paper author") {
    auto corpus = synth_generate({30, 5, 4, 8, 1.0, 1});
    RunConfig config;
    config.d0 = 16;
    auto data = build_dataset(corpus.records, config);
    std::map<std::string, std::size_t> blocks_per_author;
    for (const auto &name : prepare_labeled(data, corpus.gold, BlockAttribute::kEmail)) {
      for (const auto &a : name.authors) ++blocks_per_author[a];
    }
    for (const auto &a : corpus.authors) {
      if (a.papers >= 2) CHECK(blocks_per_author[a.author_id] >= 2);
    }
  }
  SUBCASE("same seed gives the same corpus") {
    auto a = synth_generate({30, 5, 4, 8, 0.5, 9});
    auto b = synth_generate({30, 5, 4, 8, 0.5, 9});
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(to_json_line(a.records[i]) == to_json_line(b.records[i]));
    std::ostringstream ga, gb;
    write_gold(ga, a.gold);
    write_gold(gb, b.gold);
    CHECK(ga.str() == gb.str());
  }
  CHECK_THROWS_AS(synth_generate({3, 5, 4, 8, 0.5, 9}), ValidationError);
  CHECK_THROWS_AS(synth_generate({30, 5, 4, 8, 1.5, 9}), ValidationError);
}

TEST_CASE("gold files round-trip and reject bad lines") {
  std::vector<GoldEntry> gold = {{"p1", "Wei Wang", "a1"}, {"p2", "Wei Wang", "a2"}};
  std::stringstream io;
  write_gold(io, gold);
  auto back = load_gold(io);
  REQUIRE(back.size() == 2);
  CHECK(back[1].author_id == "a2");
  std::istringstream bad("{\"paper_id\":\"p1\",\"name\":\"x\",\"author_id\":\"a\"}\n{broken\n");
  try {
    load_gold(bad);
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
  }
  std::istringstream missing("{\"paper_id\":\"p1\",\"name\":\"x\"}\n");
  CHECK_THROWS_AS(load_gold(missing), SchemaError);
}

TEST_CASE("training on a tiny corpus lowers the loss") {
  // Two authors named Wei Wang, six papers each, each switching email once.
  std::vector<PaperRecord> recs;
  std::vector<GoldEntry> gold;
  for (int author = 0; author < 2; ++author) {
    const std::string who = author == 0 ? "a" : "b";
    for (int k = 0; k < 6; ++k) {
      const std::string id = "p" + who + std::to_string(k);
      const std::string email = who + (k < 3 ? "1" : "2") + "@x.org";
      auto r = authored(id, 2000 + k, "Wei Wang", email, {"Coauthor " + who + std::to_string(k % 2)});
      r.venue = author == 0 ? "KDD" : "CVPR";
      r.topics = {author == 0 ? "graph mining" : "image segmentation"};
      if (k > 0) r.references = {"p" + who + std::to_string(k - 1)};
      recs.push_back(r);
      gold.push_back({id, "Wei Wang", who});
    }
  }
  RunConfig config;
  config.d0 = 32;
  config.d = 16;
  config.d_prime = 8;
  config.d_h = 8;
  config.epochs = 50;
  config.patience = 50;
  config.seed = 7;
  config.lr = 5e-3;
  auto data = build_dataset(recs, config);
  auto names = prepare_labeled(data, gold, BlockAttribute::kEmail);
  REQUIRE(names.size() == 1);
  CHECK(names[0].blocks.size() == 4);
  auto run = train_pipeline(ModelKind::kPairNet, data, names, config);
  REQUIRE(run.result.log.size() == 50);
  MESSAGE(std::setprecision(9) << "first loss " << run.result.log.front().loss << ", last loss " << run.result.log.back().loss);
  CHECK(run.result.log.back().loss < run.result.log.front().loss);
  // Recorded from the first run of this configuration.
  CHECK(run.result.log.front().loss == doctest::Approx(1.37846136).epsilon(1e-5));
  CHECK(run.result.log.back().loss == doctest::Approx(0.598606229).epsilon(1e-5));
  auto again = train_pipeline(ModelKind::kPairNet, data, names, config);
  CHECK(again.params.bitwise_equal(run.params));
}

TEST_CASE("eta = 0 logs cross-entropy only") {
  auto corpus = toy_instance();
  RunConfig config;
  config.d0 = 16;
  config.d = 6;
  config.d_prime = 4;
  config.d_h = 4;
  config.epochs = 3;
  config.eta = 0.0;
  auto data = build_dataset(corpus.records, config);
  auto names = prepare_labeled(data, corpus.gold, BlockAttribute::kEmail);
  auto run = train_pipeline(ModelKind::kPairNet, data, names, config);
  for (const auto &e : run.result.log) CHECK(e.loss == doctest::Approx(e.classify).epsilon(1e-6));
  TrainOptions ce;
  ce.ce_only = true;
  auto ce_run = train_pipeline(ModelKind::kPairNet, data, names, config, ce);
  CHECK(ce_run.params.bitwise_equal(run.params));
}
