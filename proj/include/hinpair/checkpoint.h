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

// Binary checkpoints.
//
// Layout, all integers little-endian:
//   "HINPCKPT"                     8 bytes
//   version                        u32
//   config JSON                    u32 length + UTF-8 bytes
//   parameter count                u32
//   per parameter:
//     name                         u32 length + bytes
//     rank                         u32
//     dims                         rank x u64
//     values                       float32 bit patterns, row-major

#ifndef HINPAIR_CHECKPOINT_H_
#define HINPAIR_CHECKPOINT_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "hinpair/config.h"
#include "hinpair/optim.h"

namespace hinpair {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  RunConfig config;
  ParameterStore<float> params;
};

void save_checkpoint(std::ostream &out, const RunConfig &config,
                     const ParameterStore<float> &params);
void save_checkpoint(const std::string &path, const RunConfig &config,
                     const ParameterStore<float> &params);

// Throws FormatError on a bad magic or version, CorruptionError on a
// truncated or inconsistent payload.
Checkpoint load_checkpoint(std::istream &in);
Checkpoint load_checkpoint(const std::string &path);

// Throws ConfigError naming the first architecture key that differs.
void require_compatible(const RunConfig &checkpoint, const RunConfig &run);

}  // namespace hinpair

#endif  // HINPAIR_CHECKPOINT_H_
