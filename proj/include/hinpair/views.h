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

// Meta-path views (paper-paper graphs induced by a typed path) and l-egonet
// mini-batch subgraphs sampled from them.

#ifndef HINPAIR_VIEWS_H_
#define HINPAIR_VIEWS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hinpair/graph.h"

namespace hinpair {

class MetaPath {
 public:
  // Throws ValidationError unless endpoints are Paper, the length is 2 or 3
  // and the interior kind is Author, Topic or Venue.
  explicit MetaPath(std::vector<NodeKind> kinds);

  // Parses a canonical name such as "PAP" or "PP".
  static MetaPath parse(std::string_view name);

  const std::vector<NodeKind> &kinds() const { return kinds_; }
  const std::string &name() const { return name_; }
  bool operator==(const MetaPath &other) const { return kinds_ == other.kinds_; }

 private:
  std::vector<NodeKind> kinds_;
  std::string name_;
};

// The default meta-path set: PP, PAP, PTP, PVP.
std::vector<MetaPath> default_meta_paths();

// Paper-paper graph over paper NodeIds 0..num_papers-1.
class MetaPathView {
 public:
  MetaPathView(MetaPath path, std::vector<std::vector<NodeId>> adjacency);

  const MetaPath &path() const { return path_; }
  std::size_t num_papers() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  // Sorted, duplicate-free, never contains `paper`. Throws LookupError.
  std::span<const NodeId> neighbors(NodeId paper) const;
  bool has_edge(NodeId a, NodeId b) const;

 private:
  MetaPath path_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t num_edges_ = 0;
};

MetaPathView build_view(const HeteroGraph &g, const MetaPath &path);
std::vector<MetaPathView> build_views(const HeteroGraph &g, std::span<const MetaPath> paths);

// Union of l-egonets of the seeds. Nodes are sorted by NodeId and addressed
// locally by their position; adjacency is induced from the view.
struct EgonetSubgraph {
  std::vector<NodeId> nodes;
  std::vector<NodeId> seeds;
  std::vector<std::vector<std::uint32_t>> adjacency;  // local indices, sorted
  std::vector<std::uint32_t> hops;                    // BFS distance from the seed set

  std::size_t size() const { return nodes.size(); }
  // Local index of a paper; nullopt if absent.
  std::optional<std::uint32_t> local(NodeId paper) const;
  // Undirected edges as (smaller, larger) NodeId pairs, sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;
};

struct EgonetOptions {
  // Expand at most this many neighbors per node during BFS (deterministic
  // seeded choice). Off by default; induced edges are never capped.
  std::optional<std::size_t> neighbor_cap;
  std::uint64_t cap_seed = 0;
};

// BFS to depth l from every seed. l = 0 returns the seeds alone without
// edges. Throws ContractError on empty seeds, LookupError on unknown seeds.
EgonetSubgraph sample_egonet(const MetaPathView &view, std::span<const NodeId> seeds,
                             std::size_t l, const EgonetOptions &options = {});

// One subgraph per view, each seeded with the whole batch.
std::vector<EgonetSubgraph> batch_subgraphs(std::span<const MetaPathView> views,
                                            std::span<const NodeId> batch, std::size_t l,
                                            const EgonetOptions &options = {});

}  // namespace hinpair

#endif  // HINPAIR_VIEWS_H_
