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

#ifndef HINPAIR_METRICS_H_
#define HINPAIR_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace hinpair {

// Pairwise clustering quality over all unordered item pairs.
struct PairwiseMetrics {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::uint64_t predicted_same = 0;
  std::uint64_t gold_same = 0;
  std::uint64_t both_same = 0;
};

// Precision is 1 without predicted-same pairs and recall is 1 without
// gold-same pairs. F1 is 0 when both are 0.
PairwiseMetrics pairwise_from_counts(std::uint64_t predicted_same, std::uint64_t gold_same,
                                     std::uint64_t both_same);

// pred[i] and gold[i] are the predicted cluster and gold author of item i.
// Throws ContractError on a length mismatch.
PairwiseMetrics pairwise_metrics(std::span<const std::size_t> pred,
                                 std::span<const std::string> gold);

struct ClassificationMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  std::optional<double> auc;  // absent unless both classes occur
  std::size_t count = 0;
};

// Harmonic mean of precision and recall from confusion counts; 1 when there
// are neither true nor predicted positives.
double binary_f1(std::size_t tp, std::size_t fp, std::size_t fn);

// Mann-Whitney rank statistic; tied scores count 1/2.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels);

// A score counts as positive when it exceeds tau.
ClassificationMetrics classification_metrics(std::span<const double> scores,
                                             std::span<const int> labels, double tau = 0.5);

}  // namespace hinpair

#endif  // HINPAIR_METRICS_H_
