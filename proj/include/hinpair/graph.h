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

// Heterogeneous academic network: papers, authors, topics and venues linked
// by typed undirected edges, plus one feature row per paper.

#ifndef HINPAIR_GRAPH_H_
#define HINPAIR_GRAPH_H_

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hinpair {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { kPaper = 0, kAuthor = 1, kTopic = 2, kVenue = 3 };
inline constexpr std::size_t kNumNodeKinds = 4;

// Writes: Author-Paper, Cites: Paper-Paper, HasTopic: Paper-Topic,
// PublishedIn: Paper-Venue. All stored symmetrically.
enum class EdgeKind : std::uint8_t { kWrites = 0, kCites = 1, kHasTopic = 2, kPublishedIn = 3 };
inline constexpr std::size_t kNumEdgeKinds = 4;

const char *to_string(NodeKind kind);
const char *to_string(EdgeKind kind);

// The two endpoint kinds an edge kind connects (first is never Paper unless
// both are).
std::pair<NodeKind, NodeKind> edge_signature(EdgeKind kind);

struct AuthorMention {
  std::string name;
  std::optional<std::string> email;
  std::optional<std::string> affiliation;
};

struct PaperRecord {
  std::string paper_id;
  std::string title;
  int year = 0;
  std::string venue;
  std::vector<AuthorMention> authors;
  std::vector<std::string> topics;
  std::vector<std::string> references;
};

// Parses line-delimited JSON records. Blank lines are skipped; unknown fields
// are ignored. Throws ParseError, DuplicateError or SchemaError.
std::vector<PaperRecord> load_corpus(std::istream &in);

// One JSONL line for `record`, inverse of load_corpus for a single line.
std::string to_json_line(const PaperRecord &record);

// Lowercases and collapses runs of whitespace; trims both ends.
std::string normalize_name(std::string_view name);

// Row-major float matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0f) {}

  std::span<float> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  std::span<const float> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

class HeteroGraph {
 public:
  std::size_t num_nodes() const { return kinds_.size(); }
  std::size_t num_nodes(NodeKind kind) const;
  std::size_t num_papers() const { return num_nodes(NodeKind::kPaper); }

  NodeKind kind(NodeId v) const;
  const std::string &label(NodeId v) const;
  std::optional<NodeId> find(NodeKind kind, std::string_view label) const;

  // Sorted, duplicate-free. Empty when the edge kind cannot touch v's kind.
  // Throws LookupError for an unknown node.
  std::span<const NodeId> neighbors(NodeId v, EdgeKind kind) const;

  // Number of undirected edges of the given kind.
  std::size_t num_edges(EdgeKind kind) const;

  // Citations whose target paper_id is not in the corpus.
  std::size_t dropped_citations() const { return dropped_citations_; }

  bool has_features() const { return features_.rows > 0; }
  const DenseMatrix &features() const { return features_; }
  // Rows must equal num_papers() and every value must be finite.
  void attach_features(DenseMatrix features);

 private:
  friend HeteroGraph build_graph(std::span<const PaperRecord> records);

  NodeId add_node(NodeKind kind, std::string label);
  void add_edge(NodeId u, NodeId v, EdgeKind kind);
  void finalize();

  std::vector<NodeKind> kinds_;
  std::vector<std::string> labels_;
  std::array<std::map<std::string, NodeId, std::less<>>, kNumNodeKinds> index_;
  std::array<std::size_t, kNumNodeKinds> kind_counts_{};
  std::array<std::vector<std::vector<NodeId>>, kNumEdgeKinds> adjacency_;
  std::size_t dropped_citations_ = 0;
  DenseMatrix features_;
};

// Paper nodes take ids 0..records.size()-1 in record order, followed by
// authors, topics and venues in first-seen order.
HeteroGraph build_graph(std::span<const PaperRecord> records);

// Hashed bag of title and topic tokens, L2-normalized per row. A token t
// contributes 1.0 to bucket token_bucket(seed, t, d0).
DenseMatrix featurize_papers(std::span<const PaperRecord> records, std::size_t d0,
                             std::uint64_t seed);

// Lowercase alphanumeric runs of `text`.
std::vector<std::string> tokenize(std::string_view text);

// FNV-1a (64-bit) over the 8 little-endian seed bytes followed by the token
// bytes, reduced mod d0.
std::size_t token_bucket(std::uint64_t seed, std::string_view token, std::size_t d0);

}  // namespace hinpair

#endif  // HINPAIR_GRAPH_H_
