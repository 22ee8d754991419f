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

#include "hinpair/cluster.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "hinpair/errors.h"

namespace hinpair {

using nlohmann::json;

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins, so every root is its set's minimum.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

json pairwise_json(const PairwiseMetrics &m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

std::vector<std::size_t> merge_blocks(
    std::size_t n_blocks, std::span<const std::pair<std::size_t, std::size_t>> positives) {
  DisjointSets sets(n_blocks);
  for (const auto &[a, b] : positives) {
    if (a >= n_blocks || b >= n_blocks) throw ContractError("merge_blocks: block out of range");
    sets.unite(a, b);
  }
  std::vector<std::size_t> label(n_blocks);
  std::map<std::size_t, std::size_t> numbering;
  for (std::size_t i = 0; i < n_blocks; ++i) {
    label[i] = numbering.emplace(sets.find(i), numbering.size()).first->second;
  }
  return label;
}

std::vector<std::pair<NodeId, std::size_t>> NameClustering::paper_clusters() const {
  std::vector<std::pair<NodeId, std::size_t>> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (const auto &item : blocks[i].sequence.items) out.emplace_back(item.paper, cluster_of_block[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

NameClustering disambiguate(const PairClassifier<float> &model, const std::string &name,
                            std::vector<Block> blocks, double tau) {
  NameClustering out;
  out.name = name;
  std::vector<PairExample> examples;
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < blocks.size(); ++b) {
      examples.push_back({blocks[a].sequence, blocks[b].sequence, 0});
      out.pairs.push_back({a, b, 0.0, false});
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> positives;
  if (!examples.empty()) {
    const auto scores = model.score(examples);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      out.pairs[i].score = scores[i];
      out.pairs[i].positive = scores[i] > tau;
      if (out.pairs[i].positive) positives.emplace_back(out.pairs[i].a, out.pairs[i].b);
    }
  }
  out.cluster_of_block = merge_blocks(blocks.size(), positives);
  out.num_clusters = std::set<std::size_t>(out.cluster_of_block.begin(), out.cluster_of_block.end())
                         .size();
  out.blocks = std::move(blocks);
  return out;
}

json clustering_to_json(std::span<const NameClustering> names, const Dataset &data) {
  json out = json::array();
  for (const auto &nc : names) {
    std::vector<json> clusters(nc.num_clusters, json::array());
    for (const auto &[paper, cluster] : nc.paper_clusters()) {
      clusters[cluster].push_back(data.records[paper].paper_id);
    }
    json blocks = json::array();
    for (std::size_t i = 0; i < nc.blocks.size(); ++i) {
      json ids = json::array();
      for (const auto &item : nc.blocks[i].sequence.items) ids.push_back(item.paper_id);
      blocks.push_back({{"block_id", nc.blocks[i].block_id},
                        {"attribute", nc.blocks[i].attribute},
                        {"cluster", nc.cluster_of_block[i]},
                        {"papers", ids}});
    }
    out.push_back({{"name", nc.name}, {"clusters", clusters}, {"blocks", blocks}});
  }
  return out;
}

json EvalReport::to_json() const {
  json per = json::array();
  for (const auto &n : per_name) {
    per.push_back({{"name", n.name},
                   {"papers", n.papers},
                   {"blocks", n.blocks},
                   {"clusters", n.clusters},
                   {"authors", n.authors},
                   {"pairwise", pairwise_json(n.pairwise)}});
  }
  json cls = {{"accuracy", classification.accuracy},
              {"f1", classification.f1},
              {"auc", classification.auc ? json(*classification.auc) : json(nullptr)},
              {"pairs", classification.count}};
  return {{"pairwise", pairwise_json(pairwise)}, {"classification", cls}, {"per_name", per}};
}

EvalReport evaluate_clusterings(std::span<const NameClustering> clusterings,
                                std::span<const LabeledBlocks> gold, double tau) {
  if (clusterings.size() != gold.size()) throw ContractError("evaluate: name count mismatch");
  EvalReport report;
  std::uint64_t p = 0, g = 0, b = 0;
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto &nc = clusterings[i];
    const auto &lb = gold[i];
    if (nc.blocks.size() != lb.blocks.size()) throw ContractError("evaluate: block mismatch");
    const auto &cands = lb.candidates;
    std::vector<std::size_t> pred;
    std::vector<std::string> truth;
    for (const auto &[paper, cluster] : nc.paper_clusters()) {
      auto it = std::lower_bound(cands.papers.begin(), cands.papers.end(), paper);
      if (it == cands.papers.end() || *it != paper) throw ContractError("evaluate: missing gold");
      pred.push_back(cluster);
      truth.push_back(cands.gold[static_cast<std::size_t>(it - cands.papers.begin())]);
    }
    NameReport nr;
    nr.name = nc.name;
    nr.papers = pred.size();
    nr.blocks = nc.blocks.size();
    nr.clusters = nc.num_clusters;
    nr.authors = std::set<std::string>(truth.begin(), truth.end()).size();
    nr.pairwise = pairwise_metrics(pred, truth);
    p += nr.pairwise.predicted_same;
    g += nr.pairwise.gold_same;
    b += nr.pairwise.both_same;
    report.per_name.push_back(std::move(nr));
    for (const auto &sp : nc.pairs) {
      scores.push_back(sp.score);
      labels.push_back(lb.authors[sp.a] == lb.authors[sp.b] ? 1 : 0);
    }
  }
  report.pairwise = pairwise_from_counts(p, g, b);
  report.classification = classification_metrics(scores, labels, tau);
  return report;
}

MergeRate split_author_merge_rate(std::span<const NameClustering> clusterings,
                                  std::span<const LabeledBlocks> gold) {
  if (clusterings.size() != gold.size()) throw ContractError("merge rate: name count mismatch");
  MergeRate rate;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::map<std::string, std::set<std::size_t>> blocks_of, clusters_of;
    for (std::size_t k = 0; k < gold[i].blocks.size(); ++k) {
      blocks_of[gold[i].authors[k]].insert(k);
      clusters_of[gold[i].authors[k]].insert(clusterings[i].cluster_of_block[k]);
    }
    for (const auto &[author, blocks] : blocks_of) {
      if (blocks.size() < 2) continue;
      ++rate.split_authors;
      if (clusters_of[author].size() == 1) ++rate.merged_authors;
    }
  }
  return rate;
}

}  // namespace hinpair
