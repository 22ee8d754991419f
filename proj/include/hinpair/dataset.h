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

// Corpus-level state shared by training and inference: the graph with
// features and views, gold labels, per-name candidate sets, attribute
// blocking and training-pair sampling.

#ifndef HINPAIR_DATASET_H_
#define HINPAIR_DATASET_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hinpair/config.h"
#include "hinpair/graph.h"
#include "hinpair/pairnet.h"
#include "hinpair/views.h"

namespace hinpair {

struct Dataset {
  std::vector<PaperRecord> records;  // records[v] is paper node v
  HeteroGraph graph;                 // features attached
  std::vector<MetaPathView> views;   // one per configured meta-path

  // Throws LookupError.
  NodeId paper_node(std::string_view paper_id) const;
};

// Builds the graph, hashed features (d0, seed) and views from config.
Dataset build_dataset(std::vector<PaperRecord> records, const RunConfig &config);

struct GoldEntry {
  std::string paper_id;
  std::string name;
  std::string author_id;
};

// JSONL with keys paper_id, name, author_id. Blank lines are skipped.
std::vector<GoldEntry> load_gold(std::istream &in);
void write_gold(std::ostream &out, std::span<const GoldEntry> gold);

// Papers carrying one ambiguous name.
struct NameCandidateSet {
  std::string name;                // normalized
  std::vector<NodeId> papers;      // ascending
  std::vector<std::string> gold;   // empty, or author ids aligned with papers
};

// Groups gold entries by normalized name; names ascending. Throws LookupError
// for an unknown paper, ValidationError when the paper has no such author
// or a paper is labelled twice under one name.
std::vector<NameCandidateSet> candidates_from_gold(const Dataset &data,
                                                   std::span<const GoldEntry> gold);

// Every normalized author name occurring on at least min_papers papers.
std::vector<NameCandidateSet> candidates_from_corpus(const Dataset &data,
                                                     std::size_t min_papers = 2);

struct Block {
  std::string block_id;  // "{name}#{index}"
  std::string attribute;  // normalized value, empty for attribute-less papers
  PaperSequence sequence;
};

// Lowercased, trimmed.
std::string normalize_attribute(std::string_view value);

// Groups the name's papers by the focal author's attribute value. Papers
// without it become singleton blocks. Blocks are ordered by their first
// (year, paper_id).
std::vector<Block> block_by_attribute(const NameCandidateSet &candidates,
                                      std::span<const PaperRecord> records,
                                      BlockAttribute attribute);

// Blocks of one name with the majority gold author of each block (ties go to
// the smallest id).
struct LabeledBlocks {
  NameCandidateSet candidates;
  std::vector<Block> blocks;
  std::vector<std::string> authors;  // aligned with blocks
};

// Throws ContractError when the candidate set carries no gold labels.
LabeledBlocks label_blocks(NameCandidateSet candidates, std::vector<Block> blocks);

std::vector<LabeledBlocks> prepare_labeled(const Dataset &data, std::span<const GoldEntry> gold,
                                           BlockAttribute attribute);

// Every block pair (a < b) of one name, labelled by author agreement.
std::vector<PairExample> all_block_pairs(const LabeledBlocks &name);

struct PairSample {
  std::vector<PairExample> pairs;  // positives first, then negatives
  std::size_t positives = 0;
  std::size_t negatives = 0;
  bool no_positives = false;  // warning: no same-author block pairs exist
};

// All same-author block pairs plus ratio * positives negatives drawn without
// replacement from the different-author block pairs of all names (capped by
// availability). With no positives at all, every negative is returned.
PairSample sample_training_pairs(std::span<const LabeledBlocks> names, std::int64_t ratio,
                                 std::uint64_t seed);

// Seeded shuffle of name indices into (train, validation). At least one name
// is held out whenever there are two or more.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_names(std::size_t n,
                                                                          double val_fraction,
                                                                          std::uint64_t seed);

}  // namespace hinpair

#endif  // HINPAIR_DATASET_H_
