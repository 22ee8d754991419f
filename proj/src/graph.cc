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

#include "hinpair/graph.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "hinpair/errors.h"

namespace hinpair {

const char *to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kPaper: return "Paper";
    case NodeKind::kAuthor: return "Author";
    case NodeKind::kTopic: return "Topic";
    case NodeKind::kVenue: return "Venue";
  }
  return "?";
}

const char *to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kWrites: return "Writes";
    case EdgeKind::kCites: return "Cites";
    case EdgeKind::kHasTopic: return "HasTopic";
    case EdgeKind::kPublishedIn: return "PublishedIn";
  }
  return "?";
}

std::pair<NodeKind, NodeKind> edge_signature(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kWrites: return {NodeKind::kAuthor, NodeKind::kPaper};
    case EdgeKind::kCites: return {NodeKind::kPaper, NodeKind::kPaper};
    case EdgeKind::kHasTopic: return {NodeKind::kTopic, NodeKind::kPaper};
    case EdgeKind::kPublishedIn: return {NodeKind::kVenue, NodeKind::kPaper};
  }
  return {NodeKind::kPaper, NodeKind::kPaper};
}

std::size_t HeteroGraph::num_nodes(NodeKind kind) const {
  return kind_counts_[static_cast<std::size_t>(kind)];
}

NodeKind HeteroGraph::kind(NodeId v) const {
  if (v >= kinds_.size()) throw LookupError("unknown node " + std::to_string(v));
  return kinds_[v];
}

const std::string &HeteroGraph::label(NodeId v) const {
  if (v >= labels_.size()) throw LookupError("unknown node " + std::to_string(v));
  return labels_[v];
}

std::optional<NodeId> HeteroGraph::find(NodeKind kind, std::string_view label) const {
  const auto &index = index_[static_cast<std::size_t>(kind)];
  auto it = index.find(label);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::span<const NodeId> HeteroGraph::neighbors(NodeId v, EdgeKind kind) const {
  if (v >= kinds_.size()) throw LookupError("unknown node " + std::to_string(v));
  const auto &adj = adjacency_[static_cast<std::size_t>(kind)];
  return adj[v];
}

std::size_t HeteroGraph::num_edges(EdgeKind kind) const {
  std::size_t degree_sum = 0;
  for (const auto &list : adjacency_[static_cast<std::size_t>(kind)]) degree_sum += list.size();
  return degree_sum / 2;
}

void HeteroGraph::attach_features(DenseMatrix features) {
  if (features.rows != num_papers()) {
    throw ShapeError("feature rows " + std::to_string(features.rows) + " != papers " +
                     std::to_string(num_papers()));
  }
  for (float x : features.values) {
    if (!std::isfinite(x)) throw NumericalError("non-finite feature value");
  }
  features_ = std::move(features);
}

NodeId HeteroGraph::add_node(NodeKind kind, std::string label) {
  auto &index = index_[static_cast<std::size_t>(kind)];
  auto it = index.find(label);
  if (it != index.end()) return it->second;
  const auto id = static_cast<NodeId>(kinds_.size());
  kinds_.push_back(kind);
  index.emplace(label, id);
  labels_.push_back(std::move(label));
  ++kind_counts_[static_cast<std::size_t>(kind)];
  return id;
}

void HeteroGraph::add_edge(NodeId u, NodeId v, EdgeKind kind) {
  if (u == v) return;
  auto &adj = adjacency_[static_cast<std::size_t>(kind)];
  adj[u].push_back(v);
  adj[v].push_back(u);
}

void HeteroGraph::finalize() {
  for (auto &adj : adjacency_) {
    adj.resize(kinds_.size());
    for (auto &list : adj) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }
}

HeteroGraph build_graph(std::span<const PaperRecord> records) {
  HeteroGraph g;
  for (const auto &rec : records) g.add_node(NodeKind::kPaper, rec.paper_id);

  struct PendingEdge {
    NodeId u, v;
    EdgeKind kind;
  };
  std::vector<PendingEdge> edges;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto &rec = records[i];
    const auto paper = static_cast<NodeId>(i);
    for (const auto &author : rec.authors) {
      std::string name = normalize_name(author.name);
      if (name.empty()) continue;
      edges.push_back({g.add_node(NodeKind::kAuthor, std::move(name)), paper, EdgeKind::kWrites});
    }
    for (const auto &topic : rec.topics) {
      if (topic.empty()) continue;
      edges.push_back({g.add_node(NodeKind::kTopic, topic), paper, EdgeKind::kHasTopic});
    }
    if (!rec.venue.empty()) {
      edges.push_back({g.add_node(NodeKind::kVenue, rec.venue), paper, EdgeKind::kPublishedIn});
    }
    for (const auto &ref : rec.references) {
      auto target = g.find(NodeKind::kPaper, ref);
      if (!target) {
        ++g.dropped_citations_;
        continue;
      }
      edges.push_back({paper, *target, EdgeKind::kCites});
    }
  }
  for (auto &adj : g.adjacency_) adj.resize(g.num_nodes());
  for (const auto &e : edges) g.add_edge(e.u, e.v, e.kind);
  g.finalize();
  return g;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t token_bucket(std::uint64_t seed, std::string_view token, std::size_t d0) {
  std::uint64_t h = 14695981039346656037ULL;
  for (int i = 0; i < 8; ++i) {
    h ^= (seed >> (8 * i)) & 0xffU;
    h *= 1099511628211ULL;
  }
  for (unsigned char c : token) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h % d0);
}

DenseMatrix featurize_papers(std::span<const PaperRecord> records, std::size_t d0,
                             std::uint64_t seed) {
  if (d0 < 8) throw ValidationError("d0 must be at least 8");
  DenseMatrix out(records.size(), d0);
  std::vector<double> counts(d0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (const auto &t : tokenize(records[i].title)) counts[token_bucket(seed, t, d0)] += 1.0;
    for (const auto &topic : records[i].topics) {
      for (const auto &t : tokenize(topic)) counts[token_bucket(seed, t, d0)] += 1.0;
    }
    double norm = 0.0;
    for (double c : counts) norm += c * c;
    if (norm == 0.0) continue;
    norm = std::sqrt(norm);
    auto row = out.row(i);
    for (std::size_t j = 0; j < d0; ++j) row[j] = static_cast<float>(counts[j] / norm);
  }
  return out;
}

}  // namespace hinpair
