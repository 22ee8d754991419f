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

// Synthetic ambiguous-name corpora with known authorship.
//
// Authors live in research areas. Each gets a private clique of
// collaborators, topics drawn from its area plus a private pool of area-word
// phrases, one or two venues and a career of papers. Collaborators also
// publish a few papers of their own on the author's topics. Several authors share each ambiguous name. With
// probability attr_change_prob an author's email and affiliation switch once
// mid-career, so attribute blocking splits that author in two.

#ifndef HINPAIR_SYNTH_H_
#define HINPAIR_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "hinpair/dataset.h"
#include "hinpair/graph.h"

namespace hinpair {

struct SynthOptions {
  std::size_t n_authors = 200;
  std::size_t n_names = 30;
  std::size_t min_papers = 4;
  std::size_t max_papers = 14;
  double attr_change_prob = 0.6;
  std::uint64_t seed = 42;
};

struct SynthAuthor {
  std::string author_id;
  std::string name;
  std::size_t papers = 0;
  bool changed = false;  // attributes switched mid-career
};

struct SynthCorpus {
  std::vector<PaperRecord> records;  // ascending paper_id
  std::vector<GoldEntry> gold;       // one entry per (paper, ambiguous author)
  std::vector<SynthAuthor> authors;
};

// Throws ValidationError unless 1 <= n_names <= n_authors,
// 1 <= min_papers <= max_papers and attr_change_prob lies in [0, 1].
SynthCorpus synth_generate(const SynthOptions &options);

// Six papers, two authors sharing one name, each split into two email
// blocks. Used for gradient checks.
SynthCorpus toy_instance();

}  // namespace hinpair

#endif  // HINPAIR_SYNTH_H_
