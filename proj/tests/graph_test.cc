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

#include <cmath>
#include <set>
#include <sstream>

#include <doctest.h>

#include "hinpair/errors.h"
#include "hinpair/graph.h"
#include "oracles.h"

using namespace hinpair;

namespace {

PaperRecord paper(std::string id, std::vector<std::string> authors, std::string venue = "",
                  std::vector<std::string> topics = {}, std::vector<std::string> refs = {}) {
  PaperRecord r;
  r.paper_id = std::move(id);
  r.title = "t";
  r.year = 2000;
  r.venue = std::move(venue);
  for (auto &a : authors) r.authors.push_back({std::move(a), std::nullopt, std::nullopt});
  r.topics = std::move(topics);
  r.references = std::move(refs);
  return r;
}

}  // namespace

TEST_CASE("load_corpus parses one record with two authors and three topics") {
  std::istringstream in(
      R"({"paper_id":"p1","title":"Graphs","year":2001,"venue":"V","authors":[{"name":"A","email":"a@x"},{"name":"B","affiliation":null}],"topics":["x","y","z"],"references":[],"extra":1})"
      "\n");
  auto recs = load_corpus(in);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].authors.size() == 2);
  CHECK(recs[0].topics.size() == 3);
  CHECK(recs[0].authors[0].email == "a@x");
  CHECK_FALSE(recs[0].authors[1].affiliation.has_value());
}

TEST_CASE("load_corpus on an empty stream returns nothing") {
  std::istringstream in("");
  CHECK(load_corpus(in).empty());
}

TEST_CASE("load_corpus rejects a duplicated paper_id by name") {
  std::istringstream in(
      "{\"paper_id\":\"p1\",\"title\":\"a\",\"year\":2000}\n"
      "{\"paper_id\":\"p1\",\"title\":\"b\",\"year\":2001}\n");
  try {
    load_corpus(in);
    FAIL("expected DuplicateError");
  } catch (const DuplicateError &e) {
    CHECK(e.key() == "p1");
  }
}

TEST_CASE("load_corpus reports malformed lines and missing fields") {
  std::istringstream bad("{\"paper_id\":\"p1\",\"title\":\"a\",\"year\":2000}\n\n{oops\n");
  try {
    load_corpus(bad);
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
  }
  std::istringstream no_year("{\"paper_id\":\"p1\",\"title\":\"a\"}\n");
  CHECK_THROWS_AS(load_corpus(no_year), SchemaError);
  std::istringstream no_title("{\"paper_id\":\"p1\",\"year\":2000}\n");
  CHECK_THROWS_AS(load_corpus(no_title), SchemaError);
}

TEST_CASE("to_json_line round-trips through load_corpus") {
  PaperRecord r = paper("p9", {"Ann Lee"}, "KDD", {"mining"}, {"p1"});
  r.authors[0].email = "ann@x.org";
  std::istringstream in(to_json_line(r) + "\n");
  auto back = load_corpus(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].paper_id == "p9");
  CHECK(back[0].authors[0].email == "ann@x.org");
  CHECK(back[0].references == std::vector<std::string>{"p1"});
}

TEST_CASE("two papers by one author in distinct venues") {
  std::vector<PaperRecord> recs = {paper("p1", {"Ann"}, "V1"), paper("p2", {"ann"}, "V2")};
  auto g = build_graph(recs);
  CHECK(g.num_nodes(NodeKind::kPaper) == 2);
  CHECK(g.num_nodes(NodeKind::kAuthor) == 1);
  CHECK(g.num_nodes(NodeKind::kVenue) == 2);
  CHECK(g.num_edges(EdgeKind::kWrites) == 2);
}

TEST_CASE("dangling citations are dropped and counted") {
  std::vector<PaperRecord> recs = {paper("p1", {}, "", {}, {"missing"})};
  auto g = build_graph(recs);
  CHECK(g.num_edges(EdgeKind::kCites) == 0);
  CHECK(g.dropped_citations() == 1);
}

TEST_CASE("mutual citations collapse into one undirected edge") {
  std::vector<PaperRecord> recs = {paper("p1", {}, "", {}, {"p2"}), paper("p2", {}, "", {}, {"p1"})};
  CHECK(build_graph(recs).num_edges(EdgeKind::kCites) == 1);
}

TEST_CASE("neighbors lookups") {
  std::vector<PaperRecord> recs = {paper("p1", {"a1"}), paper("p2", {"a1"}), paper("p3", {})};
  auto g = build_graph(recs);
  const NodeId a1 = *g.find(NodeKind::kAuthor, "a1");
  auto nb = g.neighbors(a1, EdgeKind::kWrites);
  CHECK(std::vector<NodeId>(nb.begin(), nb.end()) == std::vector<NodeId>{0, 1});
  CHECK(g.neighbors(2, EdgeKind::kWrites).empty());
  CHECK(g.neighbors(a1, EdgeKind::kHasTopic).empty());
  CHECK_THROWS_AS(g.neighbors(999, EdgeKind::kWrites), LookupError);
}

TEST_CASE("normalize_name lowercases and collapses whitespace") {
  CHECK(normalize_name("  Wei   ZHANG ") == "wei zhang");
  CHECK(normalize_name("") == "");
}

TEST_CASE("featurize_papers examples") {
  std::vector<PaperRecord> recs(4);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].paper_id = "p" + std::to_string(i);
  recs[0].title = "Graph mining";
  recs[0].topics = {"networks"};
  recs[1] = recs[0];
  recs[1].paper_id = "p1";
  recs[3].title = "data data";
  auto x = featurize_papers(recs, 128, 42);
  SUBCASE("identical content gives identical rows") {
    for (std::size_t j = 0; j < 128; ++j) CHECK(x.row(0)[j] == x.row(1)[j]);
  }
  SUBCASE("no tokens gives a zero row") {
    for (float v : x.row(2)) CHECK(v == 0.0f);
  }
  SUBCASE("repeated token gives a single unit bucket") {
    // FNV-1a of the seed bytes then "data", computed independently in Python.
    constexpr std::size_t kDataBucket = 119;
    CHECK(token_bucket(42, "data", 128) == kDataBucket);
    for (std::size_t j = 0; j < 128; ++j) CHECK(x.row(3)[j] == (j == kDataBucket ? 1.0f : 0.0f));
  }
  CHECK(token_bucket(0, "data", 128) == 37);
  CHECK(token_bucket(7, "graph", 64) == 58);
  CHECK_THROWS_AS(featurize_papers(recs, 4, 42), ValidationError);
}

TEST_CASE("tokenize splits on non-alphanumerics and lowercases") {
  CHECK(tokenize("Deep-Learning, for GRAPHS!") ==
        std::vector<std::string>{"deep", "learning", "for", "graphs"});
}

TEST_CASE("graph invariants on random corpora") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto recs = oracle::random_records(rng, 5 + rng.below(60));
    auto g = build_graph(recs);
    auto g2 = build_graph(recs);
    std::set<std::string> names;
    for (const auto &r : recs) {
      for (const auto &a : r.authors) names.insert(oracle::collapse_lower(a.name));
    }
    CHECK(g.num_papers() == recs.size());
    CHECK(g.num_nodes(NodeKind::kAuthor) == names.size());
    REQUIRE(g.num_nodes() == g2.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      CHECK(g.label(v) == g2.label(v));
      for (std::size_t k = 0; k < kNumEdgeKinds; ++k) {
        const auto kind = static_cast<EdgeKind>(k);
        auto nb = g.neighbors(v, kind);
        auto nb2 = g2.neighbors(v, kind);
        CHECK(std::equal(nb.begin(), nb.end(), nb2.begin(), nb2.end()));
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
        for (NodeId u : nb) {
          CHECK(u != v);
          auto back = g.neighbors(u, kind);
          CHECK(std::binary_search(back.begin(), back.end(), v));
        }
      }
    }
    auto x = featurize_papers(recs, 32, 3);
    for (std::size_t i = 0; i < x.rows; ++i) {
      double norm = 0;
      for (float v : x.row(i)) norm += double(v) * v;
      CHECK((norm == 0.0 || std::abs(norm - 1.0) < 1e-6));
    }
  }
}

TEST_CASE("attach_features rejects wrong row count and non-finite values") {
  std::vector<PaperRecord> recs = {paper("p1", {"a"})};
  auto g = build_graph(recs);
  CHECK_THROWS_AS(g.attach_features(DenseMatrix(2, 8)), ShapeError);
  DenseMatrix bad(1, 8);
  bad.values[3] = std::nanf("");
  CHECK_THROWS_AS(g.attach_features(bad), NumericalError);
}
