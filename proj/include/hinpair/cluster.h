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

// Block merging into author clusters and the evaluation report.

#ifndef HINPAIR_CLUSTER_H_
#define HINPAIR_CLUSTER_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hinpair/dataset.h"
#include "hinpair/metrics.h"
#include "hinpair/model.h"

namespace hinpair {

// Connected components of the positive pairs over blocks 0..n-1. Cluster ids
// are numbered by smallest member block, so the labelling depends only on
// the partition.
std::vector<std::size_t> merge_blocks(std::size_t n_blocks,
                                      std::span<const std::pair<std::size_t, std::size_t>> positives);

struct ScoredPair {
  std::size_t a = 0;
  std::size_t b = 0;
  double score = 0.0;  // probability of "same author"
  bool positive = false;
};

struct NameClustering {
  std::string name;
  std::vector<Block> blocks;
  std::vector<std::size_t> cluster_of_block;
  std::vector<ScoredPair> pairs;  // every block pair, a < b
  std::size_t num_clusters = 0;

  // (paper, cluster) for every blocked paper, ascending by paper.
  std::vector<std::pair<NodeId, std::size_t>> paper_clusters() const;
};

// Scores every block pair; pairs with score > tau are merged transitively.
NameClustering disambiguate(const PairClassifier<float> &model, const std::string &name,
                            std::vector<Block> blocks, double tau);

nlohmann::json clustering_to_json(std::span<const NameClustering> names, const Dataset &data);

struct NameReport {
  std::string name;
  std::size_t papers = 0;
  std::size_t blocks = 0;
  std::size_t clusters = 0;
  std::size_t authors = 0;
  PairwiseMetrics pairwise;
};

struct EvalReport {
  PairwiseMetrics pairwise;  // pooled pair counts over all names
  ClassificationMetrics classification;
  std::vector<NameReport> per_name;

  nlohmann::json to_json() const;
};

// `clusterings[i]` must be the clustering of `gold[i]`'s blocks.
EvalReport evaluate_clusterings(std::span<const NameClustering> clusterings,
                                std::span<const LabeledBlocks> gold, double tau);

// Authors whose papers span two or more blocks, and how many of those have
// all their blocks in one cluster.
struct MergeRate {
  std::size_t split_authors = 0;
  std::size_t merged_authors = 0;
  double rate() const {
    return split_authors == 0 ? 1.0 : static_cast<double>(merged_authors) / split_authors;
  }
};
MergeRate split_author_merge_rate(std::span<const NameClustering> clusterings,
                                  std::span<const LabeledBlocks> gold);

}  // namespace hinpair

#endif  // HINPAIR_CLUSTER_H_
