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

#include "hinpair/metrics.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "hinpair/errors.h"

namespace hinpair {

namespace {

std::uint64_t choose2(std::uint64_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

double harmonic(double p, double r) { return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

PairwiseMetrics pairwise_from_counts(std::uint64_t predicted_same, std::uint64_t gold_same,
                                     std::uint64_t both_same) {
  PairwiseMetrics m;
  m.predicted_same = predicted_same;
  m.gold_same = gold_same;
  m.both_same = both_same;
  m.precision = predicted_same == 0 ? 1.0 : static_cast<double>(both_same) / predicted_same;
  m.recall = gold_same == 0 ? 1.0 : static_cast<double>(both_same) / gold_same;
  m.f1 = harmonic(m.precision, m.recall);
  return m;
}

PairwiseMetrics pairwise_metrics(std::span<const std::size_t> pred,
                                 std::span<const std::string> gold) {
  if (pred.size() != gold.size()) {
    throw ContractError("pairwise_metrics: " + std::to_string(pred.size()) + " predictions vs " +
                        std::to_string(gold.size()) + " gold labels");
  }
  std::map<std::size_t, std::uint64_t> pred_sizes;
  std::map<std::string_view, std::uint64_t> gold_sizes;
  std::map<std::pair<std::size_t, std::string_view>, std::uint64_t> joint;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++pred_sizes[pred[i]];
    ++gold_sizes[gold[i]];
    ++joint[{pred[i], gold[i]}];
  }
  std::uint64_t p = 0, g = 0, b = 0;
  for (const auto &[k, n] : pred_sizes) p += choose2(n);
  for (const auto &[k, n] : gold_sizes) g += choose2(n);
  for (const auto &[k, n] : joint) b += choose2(n);
  return pairwise_from_counts(p, g, b);
}

double binary_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ContractError("roc_auc: length mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Twice the midrank keeps every term an integer.
  double positive_rank2 = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double rank2 = static_cast<double>(i + 1 + j);  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        positive_rank2 += rank2;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const double pos = static_cast<double>(positives);
  const double u = (positive_rank2 - pos * (pos + 1.0)) / 2.0;
  return u / (pos * static_cast<double>(negatives));
}

ClassificationMetrics classification_metrics(std::span<const double> scores,
                                             std::span<const int> labels, double tau) {
  if (scores.size() != labels.size()) {
    throw ContractError("classification_metrics: " + std::to_string(scores.size()) +
                        " scores vs " + std::to_string(labels.size()) + " labels");
  }
  ClassificationMetrics m;
  m.count = scores.size();
  std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ContractError("labels must be 0 or 1");
    const bool predicted = scores[i] > tau;
    const bool actual = labels[i] == 1;
    correct += predicted == actual;
    tp += predicted && actual;
    fp += predicted && !actual;
    fn += !predicted && actual;
  }
  m.accuracy = m.count == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(m.count);
  m.f1 = binary_f1(tp, fp, fn);
  m.auc = roc_auc(scores, labels);
  return m;
}

}  // namespace hinpair
