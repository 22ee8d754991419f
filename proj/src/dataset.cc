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

#include "hinpair/dataset.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "hinpair/errors.h"
#include "hinpair/rng.h"
#include "json.hpp"

namespace hinpair {

using nlohmann::json;

NodeId Dataset::paper_node(std::string_view paper_id) const {
  auto v = graph.find(NodeKind::kPaper, paper_id);
  if (!v) throw LookupError("unknown paper_id \"" + std::string(paper_id) + "\"");
  return *v;
}

Dataset build_dataset(std::vector<PaperRecord> records, const RunConfig &config) {
  config.validate();
  Dataset data;
  data.graph = build_graph(records);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (data.graph.find(NodeKind::kPaper, records[i].paper_id) != static_cast<NodeId>(i)) {
      throw ContractError("paper nodes must follow record order");
    }
  }
  data.graph.attach_features(featurize_papers(records, static_cast<std::size_t>(config.d0),
                                              static_cast<std::uint64_t>(config.seed)));
  const ModelDims dims = config.model_dims();
  data.views = build_views(data.graph, dims.meta_paths);
  data.records = std::move(records);
  return data;
}

std::vector<GoldEntry> load_gold(std::istream &in) {
  std::vector<GoldEntry> gold;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(lineno, e.what());
    }
    GoldEntry entry;
    for (auto [key, field] : {std::pair{"paper_id", &entry.paper_id},
                              std::pair{"name", &entry.name},
                              std::pair{"author_id", &entry.author_id}}) {
      auto it = obj.is_object() ? obj.find(key) : obj.end();
      if (it == obj.end() || !it->is_string()) {
        throw SchemaError("gold line " + std::to_string(lineno) + ": missing string \"" + key +
                          "\"");
      }
      *field = it->get<std::string>();
    }
    gold.push_back(std::move(entry));
  }
  return gold;
}

void write_gold(std::ostream &out, std::span<const GoldEntry> gold) {
  for (const auto &g : gold) {
    out << json{{"paper_id", g.paper_id}, {"name", g.name}, {"author_id", g.author_id}}.dump()
        << '\n';
  }
}

namespace {

const AuthorMention *focal_mention(const PaperRecord &rec, std::string_view name) {
  for (const auto &a : rec.authors) {
    if (normalize_name(a.name) == name) return &a;
  }
  return nullptr;
}

}  // namespace

std::vector<NameCandidateSet> candidates_from_gold(const Dataset &data,
                                                   std::span<const GoldEntry> gold) {
  std::map<std::string, std::map<NodeId, std::string>> by_name;
  for (const auto &g : gold) {
    const NodeId v = data.paper_node(g.paper_id);
    std::string name = normalize_name(g.name);
    if (!focal_mention(data.records[v], name)) {
      throw ValidationError("paper " + g.paper_id + " has no author named \"" + g.name + "\"");
    }
    if (!by_name[name].emplace(v, g.author_id).second) {
      throw ValidationError("paper " + g.paper_id + " labelled twice for \"" + g.name + "\"");
    }
  }
  std::vector<NameCandidateSet> out;
  for (auto &[name, papers] : by_name) {
    NameCandidateSet c;
    c.name = name;
    for (auto &[v, author] : papers) {
      c.papers.push_back(v);
      c.gold.push_back(author);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<NameCandidateSet> candidates_from_corpus(const Dataset &data,
                                                     std::size_t min_papers) {
  std::map<std::string, std::set<NodeId>> by_name;
  for (NodeId v = 0; v < data.records.size(); ++v) {
    for (const auto &a : data.records[v].authors) by_name[normalize_name(a.name)].insert(v);
  }
  std::vector<NameCandidateSet> out;
  for (auto &[name, papers] : by_name) {
    if (papers.size() < std::max<std::size_t>(min_papers, 1)) continue;
    out.push_back({name, {papers.begin(), papers.end()}, {}});
  }
  return out;
}

std::string normalize_attribute(std::string_view value) {
  std::size_t lo = 0, hi = value.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(value[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(value[hi - 1]))) --hi;
  std::string out(value.substr(lo, hi - lo));
  for (auto &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Block> block_by_attribute(const NameCandidateSet &candidates,
                                      std::span<const PaperRecord> records,
                                      BlockAttribute attribute) {
  std::map<std::string, std::vector<SeqItem>> grouped;
  std::vector<std::vector<SeqItem>> singletons;
  for (NodeId v : candidates.papers) {
    if (v >= records.size()) throw LookupError("paper node " + std::to_string(v));
    const PaperRecord &rec = records[v];
    SeqItem item{v, rec.year, rec.paper_id};
    const AuthorMention *mention = focal_mention(rec, candidates.name);
    std::string value;
    if (mention) {
      const auto &raw = attribute == BlockAttribute::kEmail ? mention->email : mention->affiliation;
      if (raw) value = normalize_attribute(*raw);
    }
    if (value.empty()) {
      singletons.push_back({std::move(item)});
    } else {
      grouped[value].push_back(std::move(item));
    }
  }

  std::vector<Block> blocks;
  auto by_time = [](const SeqItem &a, const SeqItem &b) {
    return std::tie(a.year, a.paper_id) < std::tie(b.year, b.paper_id);
  };
  for (auto &[value, items] : grouped) {
    std::sort(items.begin(), items.end(), by_time);
    blocks.push_back({"", value, {"", std::move(items)}});
  }
  for (auto &items : singletons) blocks.push_back({"", "", {"", std::move(items)}});
  std::sort(blocks.begin(), blocks.end(), [&](const Block &a, const Block &b) {
    return by_time(a.sequence.items.front(), b.sequence.items.front());
  });
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i].block_id = candidates.name + "#" + std::to_string(i);
    blocks[i].sequence.block_id = blocks[i].block_id;
  }
  return blocks;
}

LabeledBlocks label_blocks(NameCandidateSet candidates, std::vector<Block> blocks) {
  if (candidates.gold.size() != candidates.papers.size()) {
    throw ContractError("name \"" + candidates.name + "\" has no gold labels");
  }
  LabeledBlocks out;
  for (const auto &block : blocks) {
    std::map<std::string, std::size_t> votes;
    for (const auto &item : block.sequence.items) {
      auto it = std::lower_bound(candidates.papers.begin(), candidates.papers.end(), item.paper);
      if (it == candidates.papers.end() || *it != item.paper) {
        throw ContractError("block paper outside its candidate set");
      }
      ++votes[candidates.gold[static_cast<std::size_t>(it - candidates.papers.begin())]];
    }
    auto best = std::max_element(votes.begin(), votes.end(),
                                 [](const auto &a, const auto &b) { return a.second < b.second; });
    out.authors.push_back(best->first);
  }
  out.candidates = std::move(candidates);
  out.blocks = std::move(blocks);
  return out;
}

std::vector<LabeledBlocks> prepare_labeled(const Dataset &data, std::span<const GoldEntry> gold,
                                           BlockAttribute attribute) {
  std::vector<LabeledBlocks> out;
  for (auto &c : candidates_from_gold(data, gold)) {
    auto blocks = block_by_attribute(c, data.records, attribute);
    out.push_back(label_blocks(std::move(c), std::move(blocks)));
  }
  return out;
}

std::vector<PairExample> all_block_pairs(const LabeledBlocks &name) {
  std::vector<PairExample> pairs;
  for (std::size_t a = 0; a < name.blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < name.blocks.size(); ++b) {
      pairs.push_back({name.blocks[a].sequence, name.blocks[b].sequence,
                       name.authors[a] == name.authors[b] ? 1 : 0});
    }
  }
  return pairs;
}

PairSample sample_training_pairs(std::span<const LabeledBlocks> names, std::int64_t ratio,
                                 std::uint64_t seed) {
  if (ratio <= 0) throw ValidationError("neg_ratio must be positive");
  PairSample out;
  std::vector<PairExample> negatives;
  for (const auto &name : names) {
    for (auto &pair : all_block_pairs(name)) {
      if (pair.label == 1) {
        out.pairs.push_back(std::move(pair));
      } else {
        negatives.push_back(std::move(pair));
      }
    }
  }
  out.positives = out.pairs.size();
  out.no_positives = out.positives == 0;
  std::size_t wanted = out.no_positives ? negatives.size()
                                        : std::min(negatives.size(),
                                                   out.positives * static_cast<std::size_t>(ratio));
  std::vector<std::size_t> index(negatives.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < wanted; ++i) {
    std::swap(index[i], index[i + rng.below(index.size() - i)]);
  }
  index.resize(wanted);
  std::sort(index.begin(), index.end());
  for (std::size_t i : index) out.pairs.push_back(std::move(negatives[i]));
  out.negatives = wanted;
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_names(std::size_t n,
                                                                          double val_fraction,
                                                                          std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::size_t n_val = 0;
  if (n >= 2) {
    n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(val_fraction * n)));
    n_val = std::min(n_val, n - 1);
  }
  std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
  return {train, val};
}

}  // namespace hinpair
