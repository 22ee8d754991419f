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

#include "hinpair/cli.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hinpair/checkpoint.h"
#include "hinpair/cluster.h"
#include "hinpair/config.h"
#include "hinpair/dataset.h"
#include "hinpair/errors.h"
#include "hinpair/synth.h"
#include "hinpair/train.h"

namespace hinpair {

namespace {

using nlohmann::json;

// Raised for missing required inputs; maps to the usage exit code.
class UsageError : public Error {
 public:
  using Error::Error;
};

const std::map<std::string, std::string> &key_kinds() {
  static const std::map<std::string, std::string> kinds = {
      {"meta_paths", "list"}, {"d0", "int"},         {"d", "int"},          {"d_prime", "int"},
      {"K", "int"},           {"l", "int"},          {"d_h", "int"},        {"lr", "float"},
      {"dropout", "float"},   {"eta", "float"},      {"tau", "float"},      {"margin", "float"},
      {"attr_change_prob", "float"},                 {"attribute", "string"},
      {"batch_size", "int"},  {"epochs", "int"},     {"patience", "int"},   {"seed", "int"},
      {"neg_ratio", "int"},   {"deterministic", "bool"}};
  return kinds;
}

std::string kebab(std::string key) {
  for (auto &c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

json flag_value(const std::string &key, const std::string &text) {
  const std::string &kind = key_kinds().at(key);
  if (kind == "int") {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ConfigError(key, "expected an integer, got \"" + text + "\"");
    }
    return v;
  }
  if (kind == "float") {
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
      throw ConfigError(key, "expected a number, got \"" + text + "\"");
    }
    return v;
  }
  if (kind == "bool") {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError(key, "expected true or false, got \"" + text + "\"");
  }
  if (kind == "list") {
    json list = json::array();
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = std::min(text.find(',', start), text.size());
      list.push_back(text.substr(start, comma - start));
      start = comma + 1;
    }
    return list;
  }
  return text;
}

// Options shared by every command.
struct CommonFlags {
  std::string config_path;
  std::string corpus;
  std::string gold;
  std::string checkpoint;
  std::string out;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option *> options;

  void attach(CLI::App *app) {
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--corpus", corpus, "corpus JSONL");
    app->add_option("--gold", gold, "gold labels JSONL");
    app->add_option("--checkpoint", checkpoint, "checkpoint path");
    app->add_option("--out", out, "output path");
    for (const auto &key : config_keys()) {
      std::string names = "--" + kebab(key);
      if (key == "K") names += ",--k";
      options[key] = app->add_option(names, values[key], "config key " + key);
    }
  }

  json overrides() const {
    json j = json::object();
    for (const auto &[key, opt] : options) {
      if (opt->count() > 0) j[key] = flag_value(key, values.at(key));
    }
    return j;
  }

  // base, then the --config file, then individual flags.
  RunConfig resolve(RunConfig base) const {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config " + config_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error &e) {
        throw ConfigError("config", e.what());
      }
      base = apply_config_json(std::move(base), j);
    }
    RunConfig c = apply_config_json(std::move(base), overrides());
    c.validate();
    return c;
  }

  const std::string &require(const std::string &value, const char *flag) const {
    if (value.empty()) throw UsageError(std::string("missing required flag ") + flag);
    return value;
  }
};

std::vector<PaperRecord> read_corpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path);
  return load_corpus(in);
}

std::vector<GoldEntry> read_gold(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open gold file " + path);
  return load_gold(in);
}

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  return out;
}

void emit(const json &j, const std::string &path, std::ostream &fallback) {
  if (path.empty()) {
    fallback << j.dump(2) << '\n';
    return;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

struct SynthFlags {
  std::size_t n_authors = 200;
  std::size_t n_names = 30;
  std::size_t min_papers = 4;
  std::size_t max_papers = 14;
};

int cmd_synth(const CommonFlags &f, const SynthFlags &s, std::ostream &out) {
  const RunConfig c = f.resolve(RunConfig{});
  if (!c.attr_change_prob) throw ConfigError("attr_change_prob", "required by synth");
  SynthOptions o;
  o.n_authors = s.n_authors;
  o.n_names = s.n_names;
  o.min_papers = s.min_papers;
  o.max_papers = s.max_papers;
  o.attr_change_prob = *c.attr_change_prob;
  o.seed = static_cast<std::uint64_t>(c.seed);
  SynthCorpus corpus;
  try {
    corpus = synth_generate(o);
  } catch (const ValidationError &e) {
    throw UsageError(e.what());
  }
  auto corpus_out = open_out(f.require(f.out, "--out"));
  for (const auto &rec : corpus.records) corpus_out << to_json_line(rec) << '\n';
  auto gold_out = open_out(f.require(f.gold, "--gold"));
  write_gold(gold_out, corpus.gold);
  std::size_t changed = 0;
  for (const auto &a : corpus.authors) changed += a.changed;
  out << "wrote " << corpus.records.size() << " papers, " << corpus.gold.size()
      << " gold labels, " << changed << " of " << corpus.authors.size()
      << " authors with an attribute change\n";
  return kExitOk;
}

int cmd_train(const CommonFlags &f, std::ostream &out, std::ostream &err) {
  const RunConfig c = f.resolve(RunConfig{});
  const std::string checkpoint = f.require(f.checkpoint, "--checkpoint");
  const Dataset data = build_dataset(read_corpus(f.require(f.corpus, "--corpus")), c);
  const auto gold = read_gold(f.require(f.gold, "--gold"));
  const auto names = prepare_labeled(data, gold, c.attribute);

  std::ofstream log_out;
  if (!f.out.empty()) log_out = open_out(f.out);
  TrainOptions options;
  options.on_epoch = [&](const EpochLog &log) {
    const json j = log.to_json();
    err << j.dump() << '\n';
    if (log_out.is_open()) log_out << j.dump() << '\n';
  };
  options.on_divergence = [&](const ParameterStore<float> &last_good) {
    save_checkpoint(checkpoint, c, last_good);
    err << "training diverged; last good parameters written to " << checkpoint << '\n';
  };
  TrainRun run = train_pipeline(ModelKind::kPairNet, data, names, c, options);
  if (run.train_sample.no_positives) err << "warning: no positive training pairs\n";
  save_checkpoint(checkpoint, c, run.params);
  out << "trained " << run.result.log.size() << " epochs on " << run.train_sample.pairs.size()
      << " pairs (best epoch " << run.result.best_epoch << "); checkpoint " << checkpoint << '\n';
  return kExitOk;
}

struct Loaded {
  RunConfig config;
  Checkpoint checkpoint;
};

Loaded load_for_inference(const CommonFlags &f) {
  Loaded l;
  l.checkpoint = load_checkpoint(f.require(f.checkpoint, "--checkpoint"));
  l.config = f.resolve(l.checkpoint.config);
  require_compatible(l.checkpoint.config, l.config);
  return l;
}

int cmd_disambiguate(const CommonFlags &f, std::ostream &out) {
  Loaded l = load_for_inference(f);
  const Dataset data = build_dataset(read_corpus(f.require(f.corpus, "--corpus")), l.config);
  auto model = make_model(ModelKind::kPairNet, data, l.config, l.checkpoint.params);
  std::vector<NameCandidateSet> cands;
  if (!f.gold.empty()) {
    cands = candidates_from_gold(data, read_gold(f.gold));
  } else {
    cands = candidates_from_corpus(data);
  }
  std::vector<NameClustering> clusterings;
  for (const auto &c : cands) {
    clusterings.push_back(disambiguate(*model, c.name,
                                       block_by_attribute(c, data.records, l.config.attribute),
                                       l.config.tau));
  }
  emit(clustering_to_json(clusterings, data), f.out, out);
  return kExitOk;
}

int cmd_eval(const CommonFlags &f, std::ostream &out) {
  Loaded l = load_for_inference(f);
  const Dataset data = build_dataset(read_corpus(f.require(f.corpus, "--corpus")), l.config);
  auto model = make_model(ModelKind::kPairNet, data, l.config, l.checkpoint.params);
  const auto names = prepare_labeled(data, read_gold(f.require(f.gold, "--gold")),
                                     l.config.attribute);
  std::vector<NameClustering> clusterings;
  for (const auto &n : names) {
    clusterings.push_back(disambiguate(*model, n.candidates.name, n.blocks, l.config.tau));
  }
  emit(evaluate_clusterings(clusterings, names, l.config.tau).to_json(), f.out, out);
  return kExitOk;
}

int cmd_gradcheck(const CommonFlags &f, std::size_t coords, std::ostream &out) {
  const RunConfig c = f.resolve(RunConfig{});
  std::vector<PaperRecord> records;
  std::vector<GoldEntry> gold;
  if (!f.corpus.empty()) {
    records = read_corpus(f.corpus);
    gold = read_gold(f.require(f.gold, "--gold"));
  } else {
    SynthCorpus toy = toy_instance();
    records = std::move(toy.records);
    gold = std::move(toy.gold);
  }
  const Dataset data = build_dataset(std::move(records), c);
  std::vector<PairExample> pairs;
  for (const auto &name : prepare_labeled(data, gold, c.attribute)) {
    for (auto &p : all_block_pairs(name)) pairs.push_back(std::move(p));
  }
  GradCheckOptions options;
  options.seed = static_cast<std::uint64_t>(c.seed);
  if (coords > 0) options.max_coords_per_tensor = coords;
  const GradCheckResult r = check_model_gradients(data, pairs, c, options);
  out << json{{"max_relative_error", r.max_relative_error},
              {"checked", r.checked},
              {"skipped_kinks", r.skipped_kinks},
              {"worst", r.worst}}
             .dump()
      << '\n';
  return r.max_relative_error < 1e-3 ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Author name disambiguation over heterogeneous scholarly graphs", "hinpair"};
  app.require_subcommand(1);

  CommonFlags synth_f, train_f, disamb_f, eval_f, grad_f;
  SynthFlags synth_s;
  std::size_t coords = 64;

  auto *synth = app.add_subcommand("synth", "write a synthetic corpus (--out) and gold file (--gold)");
  synth_f.attach(synth);
  synth->add_option("--n-authors", synth_s.n_authors, "number of distinct authors");
  synth->add_option("--n-names", synth_s.n_names, "number of shared ambiguous names");
  synth->add_option("--min-papers", synth_s.min_papers, "fewest papers per author");
  synth->add_option("--max-papers", synth_s.max_papers, "most papers per author");
  auto *train = app.add_subcommand("train", "train on --corpus/--gold, write --checkpoint");
  train_f.attach(train);
  auto *disamb = app.add_subcommand("disambiguate", "cluster the blocks of every name");
  disamb_f.attach(disamb);
  auto *eval = app.add_subcommand("eval", "score clusterings against --gold");
  eval_f.attach(eval);
  auto *grad = app.add_subcommand("gradcheck", "finite-difference check of the full loss");
  grad_f.attach(grad);
  grad->add_option("--coords", coords, "coordinates checked per tensor, 0 for all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_f, synth_s, out);
    if (train->parsed()) return cmd_train(train_f, out, err);
    if (disamb->parsed()) return cmd_disambiguate(disamb_f, out);
    if (eval->parsed()) return cmd_eval(eval_f, out);
    return cmd_gradcheck(grad_f, coords, out);
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError &e) {
    err << "numerical abort: " << e.what() << '\n';
    return kExitAbort;
  } catch (const CorruptionError &e) {
    err << "corrupt checkpoint: " << e.what() << '\n';
    return kExitAbort;
  } catch (const FormatError &e) {
    err << "bad checkpoint: " << e.what() << '\n';
    return kExitAbort;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace hinpair
