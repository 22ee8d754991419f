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

#include "hinpair/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "hinpair/errors.h"

namespace hinpair {

namespace {

constexpr char kMagic[8] = {'H', 'I', 'N', 'P', 'C', 'K', 'P', 'T'};
constexpr std::uint64_t kMaxDim = std::uint64_t{1} << 32;

template <typename U>
void put(std::ostream &out, U value) {
  unsigned char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char *>(bytes), sizeof(U));
}

void put_string(std::ostream &out, const std::string &s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  explicit Reader(std::istream &in) : in_(in) {}

  void bytes(char *dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw CorruptionError("checkpoint truncated");
  }

  template <typename U>
  U get() {
    unsigned char raw[sizeof(U)];
    bytes(reinterpret_cast<char *>(raw), sizeof(U));
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(raw[i]) << (8 * i);
    return value;
  }

  std::string string(std::size_t limit) {
    const auto n = get<std::uint32_t>();
    if (n > limit) throw CorruptionError("checkpoint string length " + std::to_string(n));
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

 private:
  std::istream &in_;
};

}  // namespace

void save_checkpoint(std::ostream &out, const RunConfig &config,
                     const ParameterStore<float> &params) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put_string(out, config.to_json().dump());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto &t = params.tensors()[i];
    put_string(out, params.names()[i]);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t dim : t.shape()) put<std::uint64_t>(out, dim);
    for (float v : t.values()) put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  if (!out) throw Error("checkpoint write failed");
}

void save_checkpoint(const std::string &path, const RunConfig &config,
                     const ParameterStore<float> &params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  save_checkpoint(out, config, params);
}

Checkpoint load_checkpoint(std::istream &in) {
  Reader r(in);
  char magic[sizeof(kMagic)];
  try {
    r.bytes(magic, sizeof(magic));
  } catch (const CorruptionError &) {
    throw FormatError("not a checkpoint: file too short");
  }
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw FormatError("not a checkpoint");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint version " + std::to_string(version) + ", expected " +
                      std::to_string(kCheckpointVersion));
  }
  Checkpoint ck;
  const std::string config_text = r.string(std::size_t{1} << 20);
  try {
    ck.config = apply_config_json(RunConfig{}, nlohmann::json::parse(config_text));
  } catch (const nlohmann::json::exception &e) {
    throw CorruptionError(std::string("checkpoint config unreadable: ") + e.what());
  } catch (const ConfigError &e) {
    throw CorruptionError(std::string("checkpoint config invalid: ") + e.what());
  }
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t p = 0; p < count; ++p) {
    std::string name = r.string(4096);
    const auto rank = r.get<std::uint32_t>();
    if (rank == 0 || rank > 4) throw CorruptionError("parameter " + name + " has rank " + std::to_string(rank));
    Shape shape;
    std::uint64_t elements = 1;
    for (std::uint32_t k = 0; k < rank; ++k) {
      const auto dim = r.get<std::uint64_t>();
      if (dim == 0 || dim > kMaxDim) throw CorruptionError("parameter " + name + " has bad shape");
      elements *= dim;
      if (elements > kMaxDim) throw CorruptionError("parameter " + name + " too large");
      shape.push_back(static_cast<std::size_t>(dim));
    }
    std::vector<float> values(static_cast<std::size_t>(elements));
    for (auto &v : values) v = std::bit_cast<float>(r.get<std::uint32_t>());
    try {
      ck.params.add(name, std::move(shape), std::move(values));
    } catch (const ValidationError &e) {
      throw CorruptionError(e.what());
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw CorruptionError("trailing bytes after checkpoint");
  return ck;
}

Checkpoint load_checkpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path);
  return load_checkpoint(in);
}

void require_compatible(const RunConfig &checkpoint, const RunConfig &run) {
  if (auto key = architecture_mismatch(checkpoint, run)) {
    const auto a = checkpoint.to_json().at(*key).dump();
    const auto b = run.to_json().at(*key).dump();
    throw ConfigError(*key, "checkpoint has " + a + " but the run requests " + b);
  }
}

}  // namespace hinpair
