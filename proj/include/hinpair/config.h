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

#ifndef HINPAIR_CONFIG_H_
#define HINPAIR_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hinpair/embed.h"

namespace hinpair {

enum class BlockAttribute { kEmail, kAffiliation };

const char *to_string(BlockAttribute attribute);

struct RunConfig {
  std::vector<std::string> meta_paths = {"PP", "PAP", "PTP", "PVP"};
  std::int64_t d0 = 128;
  std::int64_t d = 64;
  std::int64_t d_prime = 32;
  std::int64_t K = 2;
  std::int64_t l = 2;
  std::int64_t d_h = 64;
  double lr = 5e-4;
  double dropout = 0.2;
  double eta = 1.0;
  double tau = 0.5;
  double margin = 0.0;
  std::optional<double> attr_change_prob;
  BlockAttribute attribute = BlockAttribute::kEmail;
  std::int64_t batch_size = 16;
  std::int64_t epochs = 100;
  std::int64_t patience = 10;
  std::int64_t seed = 42;
  std::int64_t neg_ratio = 1;
  bool deterministic = true;

  // Throws ConfigError naming the first offending key.
  void validate() const;
  ModelDims model_dims() const;
  nlohmann::json to_json() const;
};

// Every key name accepted by RunConfig JSON, in declaration order.
const std::vector<std::string> &config_keys();

// Overlays the keys present in `j` onto `base`. Throws ConfigError on an
// unknown key or a value of the wrong type. Does not validate ranges.
RunConfig apply_config_json(RunConfig base, const nlohmann::json &j);

// Keys whose values must agree between a checkpoint and the run loading it.
const std::vector<std::string> &architecture_keys();

// First architecture key on which a and b differ, if any.
std::optional<std::string> architecture_mismatch(const RunConfig &a, const RunConfig &b);

}  // namespace hinpair

#endif  // HINPAIR_CONFIG_H_
