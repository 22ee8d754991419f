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

#include "hinpair/views.h"

#include <algorithm>
#include <deque>
#include <limits>

#include "hinpair/errors.h"
#include "hinpair/rng.h"

namespace hinpair {

namespace {

char initial(NodeKind kind) {
  switch (kind) {
    case NodeKind::kPaper: return 'P';
    case NodeKind::kAuthor: return 'A';
    case NodeKind::kTopic: return 'T';
    case NodeKind::kVenue: return 'V';
  }
  return '?';
}

EdgeKind interior_edge(NodeKind kind) {
  switch (kind) {
    case NodeKind::kAuthor: return EdgeKind::kWrites;
    case NodeKind::kTopic: return EdgeKind::kHasTopic;
    case NodeKind::kVenue: return EdgeKind::kPublishedIn;
    case NodeKind::kPaper: break;
  }
  throw ValidationError("Paper cannot be an interior meta-path node");
}

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

}  // namespace

MetaPath::MetaPath(std::vector<NodeKind> kinds) : kinds_(std::move(kinds)) {
  for (NodeKind k : kinds_) name_.push_back(initial(k));
  if (kinds_.size() < 2 || kinds_.size() > 3) {
    throw ValidationError("meta-path \"" + name_ + "\" must have length 2 or 3");
  }
  if (kinds_.front() != NodeKind::kPaper || kinds_.back() != NodeKind::kPaper) {
    throw ValidationError("meta-path \"" + name_ + "\" must start and end at Paper");
  }
  if (kinds_.size() == 3 && kinds_[1] == NodeKind::kPaper) {
    throw ValidationError("meta-path \"" + name_ + "\" has a Paper interior");
  }
}

MetaPath MetaPath::parse(std::string_view name) {
  std::vector<NodeKind> kinds;
  for (char c : name) {
    switch (c) {
      case 'P': kinds.push_back(NodeKind::kPaper); break;
      case 'A': kinds.push_back(NodeKind::kAuthor); break;
      case 'T': kinds.push_back(NodeKind::kTopic); break;
      case 'V': kinds.push_back(NodeKind::kVenue); break;
      default:
        throw ValidationError("unknown node kind '" + std::string(1, c) + "' in meta-path \"" +
                              std::string(name) + "\"");
    }
  }
  return MetaPath(std::move(kinds));
}

std::vector<MetaPath> default_meta_paths() {
  return {MetaPath::parse("PP"), MetaPath::parse("PAP"), MetaPath::parse("PTP"),
          MetaPath::parse("PVP")};
}

MetaPathView::MetaPathView(MetaPath path, std::vector<std::vector<NodeId>> adjacency)
    : path_(std::move(path)), adjacency_(std::move(adjacency)) {
  std::size_t degree_sum = 0;
  for (const auto &list : adjacency_) degree_sum += list.size();
  num_edges_ = degree_sum / 2;
}

std::span<const NodeId> MetaPathView::neighbors(NodeId paper) const {
  if (paper >= adjacency_.size()) {
    throw LookupError("paper " + std::to_string(paper) + " not in view " + path_.name());
  }
  return adjacency_[paper];
}

bool MetaPathView::has_edge(NodeId a, NodeId b) const {
  auto list = neighbors(a);
  return std::binary_search(list.begin(), list.end(), b);
}

MetaPathView build_view(const HeteroGraph &g, const MetaPath &path) {
  const std::size_t n = g.num_papers();
  std::vector<std::vector<NodeId>> adj(n);
  if (path.kinds().size() == 2) {
    for (NodeId p = 0; p < n; ++p) {
      for (NodeId q : g.neighbors(p, EdgeKind::kCites)) adj[p].push_back(q);
    }
  } else {
    const NodeKind interior = path.kinds()[1];
    const EdgeKind edge = interior_edge(interior);
    for (NodeId x = 0; x < g.num_nodes(); ++x) {
      if (g.kind(x) != interior) continue;
      auto papers = g.neighbors(x, edge);
      for (std::size_t i = 0; i < papers.size(); ++i) {
        for (std::size_t j = i + 1; j < papers.size(); ++j) {
          adj[papers[i]].push_back(papers[j]);
          adj[papers[j]].push_back(papers[i]);
        }
      }
    }
    for (auto &list : adj) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }
  return MetaPathView(path, std::move(adj));
}

std::vector<MetaPathView> build_views(const HeteroGraph &g, std::span<const MetaPath> paths) {
  std::vector<MetaPathView> views;
  views.reserve(paths.size());
  for (const auto &p : paths) views.push_back(build_view(g, p));
  return views;
}

std::optional<std::uint32_t> EgonetSubgraph::local(NodeId paper) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), paper);
  if (it == nodes.end() || *it != paper) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes.begin());
}

std::vector<std::pair<NodeId, NodeId>> EgonetSubgraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (std::size_t i = 0; i < adjacency.size(); ++i) {
    for (std::uint32_t j : adjacency[i]) {
      if (i < j) out.emplace_back(nodes[i], nodes[j]);
    }
  }
  return out;
}

EgonetSubgraph sample_egonet(const MetaPathView &view, std::span<const NodeId> seeds,
                             std::size_t l, const EgonetOptions &options) {
  if (seeds.empty()) throw ContractError("sample_egonet needs at least one seed");
  const std::size_t n = view.num_papers();
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::deque<NodeId> frontier;
  EgonetSubgraph sub;
  for (NodeId s : seeds) {
    if (s >= n) throw LookupError("seed " + std::to_string(s) + " not in view");
    if (dist[s] == kUnreached) {
      dist[s] = 0;
      frontier.push_back(s);
      sub.seeds.push_back(s);
    }
  }

  std::vector<NodeId> reached(frontier.begin(), frontier.end());
  std::vector<NodeId> capped;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop_front();
    if (dist[v] >= l) continue;
    auto nbrs = view.neighbors(v);
    if (options.neighbor_cap && nbrs.size() > *options.neighbor_cap) {
      capped.assign(nbrs.begin(), nbrs.end());
      Rng rng(Rng::mix(options.cap_seed, v));
      for (std::size_t i = 0; i < *options.neighbor_cap; ++i) {
        std::swap(capped[i], capped[i + rng.below(capped.size() - i)]);
      }
      capped.resize(*options.neighbor_cap);
      std::sort(capped.begin(), capped.end());
      nbrs = capped;
    }
    for (NodeId u : nbrs) {
      if (dist[u] != kUnreached) continue;
      dist[u] = dist[v] + 1;
      reached.push_back(u);
      frontier.push_back(u);
    }
  }

  std::sort(reached.begin(), reached.end());
  sub.nodes = std::move(reached);
  sub.hops.reserve(sub.nodes.size());
  for (NodeId v : sub.nodes) sub.hops.push_back(dist[v]);
  sub.adjacency.resize(sub.nodes.size());
  if (l == 0) return sub;
  for (std::size_t i = 0; i < sub.nodes.size(); ++i) {
    for (NodeId u : view.neighbors(sub.nodes[i])) {
      if (dist[u] == kUnreached) continue;
      sub.adjacency[i].push_back(*sub.local(u));
    }
  }
  return sub;
}

std::vector<EgonetSubgraph> batch_subgraphs(std::span<const MetaPathView> views,
                                            std::span<const NodeId> batch, std::size_t l,
                                            const EgonetOptions &options) {
  if (batch.empty()) throw ContractError("batch_subgraphs needs a nonempty batch");
  std::vector<EgonetSubgraph> out;
  out.reserve(views.size());
  for (const auto &view : views) out.push_back(sample_egonet(view, batch, l, options));
  return out;
}

}  // namespace hinpair
