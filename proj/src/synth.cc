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

#include "hinpair/synth.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <set>

#include "hinpair/errors.h"
#include "hinpair/rng.h"

namespace hinpair {

namespace {

constexpr std::size_t kTopicsPerArea = 30;
constexpr std::size_t kVenuesPerArea = 5;
constexpr std::size_t kWordsPerArea = 12;
constexpr std::size_t kGenericWords = 40;
constexpr std::size_t kPrivateTopics = 8;  // per author pool, on top of the area's
constexpr std::size_t kSharedTopics = 8;
constexpr int kFirstYear = 1990;
constexpr int kLastStartYear = 2008;
constexpr std::int64_t kMaxBackgroundPerCollaborator = 2;

class WordMaker {
 public:
  explicit WordMaker(Rng &rng) : rng_(rng) {}

  // A fresh pronounceable lowercase word of 2-3 syllables.
  std::string fresh() {
    static constexpr const char *kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p",
                                              "r", "s", "t", "v", "z", "ch", "sh", "th"};
    static constexpr const char *kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    for (;;) {
      std::string w;
      const auto syllables = rng_.range(2, 3);
      for (std::int64_t s = 0; s < syllables; ++s) {
        w += kOnsets[rng_.below(std::size(kOnsets))];
        w += kVowels[rng_.below(std::size(kVowels))];
      }
      if (rng_.bernoulli(0.5)) w += "n";
      if (used_.insert(w).second) return w;
    }
  }

  std::string capitalized();

 private:
  Rng &rng_;
  std::set<std::string> used_;
};

struct Area {
  std::vector<std::string> words;
  std::vector<std::string> topics;
  std::vector<std::string> venues;
};

struct Author {
  std::size_t area = 0;
  std::vector<std::string> topics;
  std::vector<std::string> venues;
  std::vector<std::string> collaborators;
  std::vector<int> years;
  std::string emails[2];
  std::string affiliations[2];
  std::size_t switch_at = 0;  // papers from this index on use the second attribute set
  bool changed = false;
};

struct DraftPaper {
  std::size_t author = 0;
  std::size_t index = 0;  // position in the author's career
  int year = 0;
  bool focal = true;      // false for collaborator papers without the author
  PaperRecord record;
};

template <typename T>
std::vector<T> choose(const std::vector<T> &pool, std::size_t k, Rng &rng) {
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  for (std::size_t i : idx) out.push_back(pool[i]);
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string WordMaker::capitalized() { return capitalize(fresh()); }

std::string paper_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "P%05zu", i);
  return buf;
}

std::string author_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "A%04zu", i);
  return buf;
}

}  // namespace

SynthCorpus synth_generate(const SynthOptions &o) {
  if (o.n_names == 0 || o.n_names > o.n_authors) {
    throw ValidationError("synth: need 1 <= n_names <= n_authors");
  }
  if (o.min_papers == 0 || o.min_papers > o.max_papers) {
    throw ValidationError("synth: need 1 <= min_papers <= max_papers");
  }
  if (!(o.attr_change_prob >= 0.0 && o.attr_change_prob <= 1.0)) {
    throw ValidationError("synth: attr_change_prob must lie in [0, 1]");
  }
  Rng rng(o.seed);
  WordMaker words(rng);

  const std::size_t n_areas = std::max<std::size_t>(2, o.n_authors / 10);
  std::vector<Area> areas(n_areas);
  for (auto &area : areas) {
    for (std::size_t i = 0; i < kWordsPerArea; ++i) area.words.push_back(words.fresh());
    for (std::size_t i = 0; i < kTopicsPerArea; ++i) area.topics.push_back(words.fresh());
    for (std::size_t i = 0; i < kVenuesPerArea; ++i) {
      area.venues.push_back("Proc. " + words.capitalized() + " Conf.");
    }
  }
  std::vector<std::string> generic;
  for (std::size_t i = 0; i < kGenericWords; ++i) generic.push_back(words.fresh());

  std::vector<std::string> names;
  for (std::size_t i = 0; i < o.n_names; ++i) {
    names.push_back(words.capitalized() + " " + words.capitalized());
  }

  std::vector<Author> authors(o.n_authors);
  for (std::size_t a = 0; a < o.n_authors; ++a) {
    Author &au = authors[a];
    au.area = rng.below(n_areas);
    const Area &area = areas[au.area];
    std::vector<std::string> pool = choose(area.topics, kSharedTopics, rng);
    // Private topics are phrases over the area vocabulary, so they add topic
    // nodes without adding tokens.
    for (std::size_t i = 0; i < kPrivateTopics; ++i) {
      const auto pair = choose(area.words, 2, rng);
      pool.push_back(pair[0] + " " + pair[1]);
    }
    au.topics = choose(pool, static_cast<std::size_t>(rng.range(5, 10)), rng);
    au.venues = choose(area.venues, static_cast<std::size_t>(rng.range(1, 2)), rng);
    const auto clique = rng.range(3, 6);
    for (std::int64_t c = 0; c < clique; ++c) {
      au.collaborators.push_back(words.capitalized() + " " + words.capitalized());
    }
    const auto n_papers = static_cast<std::size_t>(
        rng.range(static_cast<std::int64_t>(o.min_papers), static_cast<std::int64_t>(o.max_papers)));
    const int start = static_cast<int>(rng.range(kFirstYear, kLastStartYear));
    const int span = static_cast<int>(rng.range(6, 15));
    au.years.push_back(start);
    for (std::size_t i = 1; i + 1 < n_papers; ++i) {
      au.years.push_back(static_cast<int>(rng.range(start, start + span)));
    }
    if (n_papers > 1) au.years.push_back(start + span);
    std::sort(au.years.begin(), au.years.end());
    for (int phase = 0; phase < 2; ++phase) {
      const std::string inst = words.fresh();
      au.emails[phase] = "u" + std::to_string(a) + "@" + inst + ".edu";
      au.affiliations[phase] = "University of " + capitalize(inst);
    }
    const bool flip = rng.bernoulli(o.attr_change_prob);
    au.changed = flip && n_papers >= 2;
    au.switch_at = au.changed ? static_cast<std::size_t>(rng.range(1, static_cast<std::int64_t>(n_papers) - 1))
                              : n_papers;
  }

  std::vector<std::size_t> name_order(o.n_authors);
  std::iota(name_order.begin(), name_order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(name_order));
  std::vector<std::string> name_of(o.n_authors);
  for (std::size_t i = 0; i < o.n_authors; ++i) name_of[name_order[i]] = names[i % o.n_names];

  std::vector<DraftPaper> drafts;
  for (std::size_t a = 0; a < o.n_authors; ++a) {
    const Author &au = authors[a];
    const Area &area = areas[au.area];
    for (std::size_t i = 0; i < au.years.size(); ++i) {
      DraftPaper d;
      d.author = a;
      d.index = i;
      d.year = au.years[i];
      PaperRecord &rec = d.record;
      rec.year = d.year;
      std::vector<std::string> title = choose(area.words, 2, rng);
      for (auto &w : choose(generic, 2, rng)) title.push_back(std::move(w));
      rng.shuffle(std::span<std::string>(title));
      for (const auto &w : title) rec.title += (rec.title.empty() ? "" : " ") + w;
      rec.topics = choose(au.topics, static_cast<std::size_t>(rng.range(1, 2)), rng);
      rec.venue = au.venues[rng.below(au.venues.size())];
      const int phase = i >= au.switch_at ? 1 : 0;
      AuthorMention focal{name_of[a], au.emails[phase], au.affiliations[phase]};
      for (const auto &c : choose(au.collaborators, static_cast<std::size_t>(rng.range(1, 3)), rng)) {
        rec.authors.push_back({c, std::nullopt, std::nullopt});
      }
      const auto slot = rng.below(rec.authors.size() + 1);
      rec.authors.insert(rec.authors.begin() + static_cast<std::ptrdiff_t>(slot), focal);
      drafts.push_back(std::move(d));
    }
  }
  const std::size_t n_focal = drafts.size();

  // Collaborators also publish without the author, which gives each author a
  // distinct neighborhood beyond the shared name.
  for (std::size_t a = 0; a < o.n_authors; ++a) {
    const Author &au = authors[a];
    const Area &area = areas[au.area];
    for (const auto &c : au.collaborators) {
      const auto n_background = rng.range(1, kMaxBackgroundPerCollaborator);
      for (std::int64_t k = 0; k < n_background; ++k) {
        DraftPaper d;
        d.author = a;
        d.focal = false;
        d.year = static_cast<int>(rng.range(au.years.front(), au.years.back()));
        PaperRecord &rec = d.record;
        rec.year = d.year;
        std::vector<std::string> title = choose(area.words, 2, rng);
        for (auto &w : choose(generic, 2, rng)) title.push_back(std::move(w));
        rng.shuffle(std::span<std::string>(title));
        for (const auto &w : title) rec.title += (rec.title.empty() ? "" : " ") + w;
        rec.topics = choose(au.topics, static_cast<std::size_t>(rng.range(1, 2)), rng);
        rec.venue = au.venues[rng.below(au.venues.size())];
        rec.authors.push_back({c, std::nullopt, std::nullopt});
        const auto &other = au.collaborators[rng.below(au.collaborators.size())];
        if (other != c && rng.bernoulli(0.5)) rec.authors.push_back({other, std::nullopt, std::nullopt});
        drafts.push_back(std::move(d));
      }
    }
  }

  // Citations point strictly back in time: earlier papers of the same
  // author and random earlier papers of the same area.
  std::vector<std::vector<std::size_t>> by_area(n_areas);
  std::vector<std::size_t> first_focal(o.n_authors, 0);
  for (std::size_t i = 0; i < n_focal; ++i) {
    by_area[authors[drafts[i].author].area].push_back(i);
    if (drafts[i].index == 0) first_focal[drafts[i].author] = i;
  }
  std::vector<std::vector<std::size_t>> refs(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const DraftPaper &d = drafts[i];
    const std::size_t first = first_focal[d.author];
    const std::size_t end = first + authors[d.author].years.size();
    for (std::size_t j = first; j < std::min(end, i); ++j) {
      if (drafts[j].year < d.year && rng.bernoulli(0.3)) refs[i].push_back(j);
    }
    const auto &pool = by_area[authors[d.author].area];
    const auto wanted = rng.range(0, 2);
    for (std::int64_t k = 0, tries = 0; k < wanted && tries < 20; ++tries) {
      const std::size_t j = pool[rng.below(pool.size())];
      if (drafts[j].year >= d.year || drafts[j].author == d.author) continue;
      if (std::find(refs[i].begin(), refs[i].end(), j) != refs[i].end()) continue;
      refs[i].push_back(j);
      ++k;
    }
  }

  std::vector<std::size_t> id_order(drafts.size());
  std::iota(id_order.begin(), id_order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(id_order));
  std::vector<std::size_t> id_of(drafts.size());
  for (std::size_t k = 0; k < id_order.size(); ++k) id_of[id_order[k]] = k;

  SynthCorpus out;
  out.records.resize(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    PaperRecord rec = std::move(drafts[i].record);
    rec.paper_id = paper_id(id_of[i]);
    std::vector<std::size_t> targets;
    for (std::size_t j : refs[i]) targets.push_back(id_of[j]);
    std::sort(targets.begin(), targets.end());
    for (std::size_t t : targets) rec.references.push_back(paper_id(t));
    if (drafts[i].focal) {
      out.gold.push_back({rec.paper_id, name_of[drafts[i].author], author_id(drafts[i].author)});
    }
    out.records[id_of[i]] = std::move(rec);
  }
  std::sort(out.gold.begin(), out.gold.end(),
            [](const GoldEntry &a, const GoldEntry &b) { return a.paper_id < b.paper_id; });
  for (std::size_t a = 0; a < o.n_authors; ++a) {
    out.authors.push_back({author_id(a), name_of[a], authors[a].years.size(), authors[a].changed});
  }
  return out;
}

SynthCorpus toy_instance() {
  auto mention = [](const char *name, const char *email) {
    return AuthorMention{name, std::string(email), std::nullopt};
  };
  auto plain = [](const char *name) { return AuthorMention{name, std::nullopt, std::nullopt}; };
  SynthCorpus out;
  out.records = {
      {"t1", "graph mining of sparse networks", 2001, "KDD",
       {mention("Wei Zhang", "wz@alpha.edu"), plain("Ana Ruiz")}, {"graphs"}, {}},
      {"t2", "protein folding energy models", 2002, "RECOMB",
       {mention("Wei Zhang", "wei@bio.org"), plain("Omar Haddad")}, {"biology"}, {}},
      {"t3", "scalable graph clustering", 2003, "KDD",
       {plain("Ana Ruiz"), mention("Wei Zhang", "wz@alpha.edu")}, {"graphs", "clustering"},
       {"t1"}},
      {"t4", "folding pathways in proteins", 2004, "RECOMB",
       {mention("Wei Zhang", "wei@bio.org"), plain("Omar Haddad")}, {"biology"}, {"t2"}},
      {"t5", "energy landscapes of protein models", 2005, "ISMB",
       {mention("Wei Zhang", "w.zhang@gene.net"), plain("Omar Haddad")}, {"biology"}, {"t4"}},
      {"t6", "community detection in graph streams", 2006, "KDD",
       {mention("Wei Zhang", "wz@beta.edu"), plain("Ana Ruiz")}, {"graphs", "clustering"},
       {"t3", "t1"}},
  };
  for (const char *id : {"t1", "t3", "t6"}) out.gold.push_back({id, "Wei Zhang", "A1"});
  for (const char *id : {"t2", "t4", "t5"}) out.gold.push_back({id, "Wei Zhang", "A2"});
  std::sort(out.gold.begin(), out.gold.end(),
            [](const GoldEntry &a, const GoldEntry &b) { return a.paper_id < b.paper_id; });
  out.authors = {{"A1", "Wei Zhang", 3, true}, {"A2", "Wei Zhang", 3, true}};
  return out;
}

}  // namespace hinpair
