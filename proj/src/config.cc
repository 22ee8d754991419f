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

#include "hinpair/config.h"

#include <algorithm>
#include <cmath>

#include "hinpair/errors.h"

namespace hinpair {

using nlohmann::json;

const char *to_string(BlockAttribute attribute) {
  return attribute == BlockAttribute::kEmail ? "email" : "affiliation";
}

namespace {

void require_positive(const char *key, std::int64_t v) {
  if (v <= 0) throw ConfigError(key, "must be positive, got " + std::to_string(v));
}

void require_range(const char *key, double v, double lo, double hi, bool hi_open) {
  const bool ok = std::isfinite(v) && v >= lo && (hi_open ? v < hi : v <= hi);
  if (!ok) {
    throw ConfigError(key, "must lie in [" + json(lo).dump() + ", " + json(hi).dump() +
                               (hi_open ? ")" : "]") + ", got " + json(v).dump());
  }
}

template <typename V>
V read(const json &j, const std::string &key) {
  try {
    return j.get<V>();
  } catch (const json::exception &) {
    throw ConfigError(key, "wrong value type " + std::string(j.type_name()));
  }
}

std::int64_t read_int(const json &j, const std::string &key) {
  if (!j.is_number_integer()) {
    throw ConfigError(key, "expected an integer, got " + std::string(j.type_name()));
  }
  return j.get<std::int64_t>();
}

double read_double(const json &j, const std::string &key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

}  // namespace

void RunConfig::validate() const {
  if (meta_paths.empty()) throw ConfigError("meta_paths", "must not be empty");
  for (const auto &name : meta_paths) {
    try {
      MetaPath::parse(name);
    } catch (const Error &e) {
      throw ConfigError("meta_paths", e.what());
    }
  }
  for (std::size_t i = 0; i < meta_paths.size(); ++i) {
    for (std::size_t j = i + 1; j < meta_paths.size(); ++j) {
      if (meta_paths[i] == meta_paths[j]) {
        throw ConfigError("meta_paths", "duplicate entry " + meta_paths[i]);
      }
    }
  }
  require_positive("d0", d0);
  if (d0 < 8) throw ConfigError("d0", "must be at least 8, got " + std::to_string(d0));
  require_positive("d", d);
  require_positive("d_prime", d_prime);
  require_positive("K", K);
  require_positive("l", l);
  require_positive("d_h", d_h);
  if (d_h < 2) throw ConfigError("d_h", "must be at least 2");
  if (!(std::isfinite(lr) && lr > 0)) throw ConfigError("lr", "must be positive, got " + json(lr).dump());
  require_range("dropout", dropout, 0.0, 1.0, true);
  if (!(std::isfinite(eta) && eta >= 0)) throw ConfigError("eta", "must be nonnegative");
  require_range("tau", tau, 0.0, 1.0, false);
  require_range("margin", margin, -1.0, 1.0, true);
  if (attr_change_prob) require_range("attr_change_prob", *attr_change_prob, 0.0, 1.0, false);
  require_positive("batch_size", batch_size);
  require_positive("epochs", epochs);
  require_positive("patience", patience);
  if (seed < 0) throw ConfigError("seed", "must be nonnegative");
  require_positive("neg_ratio", neg_ratio);
}

ModelDims RunConfig::model_dims() const {
  ModelDims dims;
  dims.meta_paths.clear();
  for (const auto &name : meta_paths) dims.meta_paths.push_back(MetaPath::parse(name));
  dims.d0 = static_cast<std::size_t>(d0);
  dims.d = static_cast<std::size_t>(d);
  dims.d_prime = static_cast<std::size_t>(d_prime);
  dims.K = static_cast<std::size_t>(K);
  dims.d_h = static_cast<std::size_t>(d_h);
  return dims;
}

json RunConfig::to_json() const {
  json j;
  j["meta_paths"] = meta_paths;
  j["d0"] = d0;
  j["d"] = d;
  j["d_prime"] = d_prime;
  j["K"] = K;
  j["l"] = l;
  j["d_h"] = d_h;
  j["lr"] = lr;
  j["dropout"] = dropout;
  j["eta"] = eta;
  j["tau"] = tau;
  j["margin"] = margin;
  j["attr_change_prob"] = attr_change_prob ? json(*attr_change_prob) : json(nullptr);
  j["attribute"] = to_string(attribute);
  j["batch_size"] = batch_size;
  j["epochs"] = epochs;
  j["patience"] = patience;
  j["seed"] = seed;
  j["neg_ratio"] = neg_ratio;
  j["deterministic"] = deterministic;
  return j;
}

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys = {
      "meta_paths", "d0",         "d",      "d_prime", "K",        "l",        "d_h",
      "lr",         "dropout",    "eta",    "tau",     "margin",   "attr_change_prob",
      "attribute",  "batch_size", "epochs", "patience", "seed",    "neg_ratio", "deterministic"};
  return keys;
}

RunConfig apply_config_json(RunConfig c, const json &j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto &[key, v] : j.items()) {
    if (key == "meta_paths") {
      c.meta_paths = read<std::vector<std::string>>(v, key);
    } else if (key == "d0") {
      c.d0 = read_int(v, key);
    } else if (key == "d") {
      c.d = read_int(v, key);
    } else if (key == "d_prime") {
      c.d_prime = read_int(v, key);
    } else if (key == "K") {
      c.K = read_int(v, key);
    } else if (key == "l") {
      c.l = read_int(v, key);
    } else if (key == "d_h") {
      c.d_h = read_int(v, key);
    } else if (key == "lr") {
      c.lr = read_double(v, key);
    } else if (key == "dropout") {
      c.dropout = read_double(v, key);
    } else if (key == "eta") {
      c.eta = read_double(v, key);
    } else if (key == "tau") {
      c.tau = read_double(v, key);
    } else if (key == "margin") {
      c.margin = read_double(v, key);
    } else if (key == "attr_change_prob") {
      if (v.is_null()) {
        c.attr_change_prob.reset();
      } else {
        c.attr_change_prob = read_double(v, key);
      }
    } else if (key == "attribute") {
      const auto s = read<std::string>(v, key);
      if (s == "email") {
        c.attribute = BlockAttribute::kEmail;
      } else if (s == "affiliation") {
        c.attribute = BlockAttribute::kAffiliation;
      } else {
        throw ConfigError(key, "must be \"email\" or \"affiliation\", got \"" + s + "\"");
      }
    } else if (key == "batch_size") {
      c.batch_size = read_int(v, key);
    } else if (key == "epochs") {
      c.epochs = read_int(v, key);
    } else if (key == "patience") {
      c.patience = read_int(v, key);
    } else if (key == "seed") {
      c.seed = read_int(v, key);
    } else if (key == "neg_ratio") {
      c.neg_ratio = read_int(v, key);
    } else if (key == "deterministic") {
      if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
      c.deterministic = v.get<bool>();
    } else {
      throw ConfigError(key, "unknown config key");
    }
  }
  return c;
}

const std::vector<std::string> &architecture_keys() {
  static const std::vector<std::string> keys = {"meta_paths", "d0", "d",   "d_prime",
                                                "K",          "d_h", "seed"};
  return keys;
}

std::optional<std::string> architecture_mismatch(const RunConfig &a, const RunConfig &b) {
  const json ja = a.to_json(), jb = b.to_json();
  for (const auto &key : architecture_keys()) {
    if (ja.at(key) != jb.at(key)) return key;
  }
  return std::nullopt;
}

}  // namespace hinpair
