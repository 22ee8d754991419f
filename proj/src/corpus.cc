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

#include <cctype>
#include <string>
#include <unordered_set>

#include "hinpair/errors.h"
#include "hinpair/graph.h"
#include "json.hpp"

namespace hinpair {

using nlohmann::json;

namespace {

std::optional<std::string> optional_string(const json &obj, const char *key,
                                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw SchemaError("line " + std::to_string(line) + ": field \"" + key +
                      "\" must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json &obj, const char *key, std::size_t line) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw SchemaError("line " + std::to_string(line) + ": field \"" + key +
                      "\" must be an array");
  }
  for (const auto &item : *it) {
    if (!item.is_string()) {
      throw SchemaError("line " + std::to_string(line) + ": \"" + key +
                        "\" entries must be strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

PaperRecord parse_record(const json &obj, std::size_t line) {
  auto schema = [line](const std::string &what) {
    return SchemaError("line " + std::to_string(line) + ": " + what);
  };
  if (!obj.is_object()) throw schema("record must be a JSON object");

  PaperRecord rec;
  auto id = obj.find("paper_id");
  if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw schema("missing or empty \"paper_id\"");
  }
  rec.paper_id = id->get<std::string>();

  auto title = obj.find("title");
  if (title == obj.end() || !title->is_string()) throw schema("missing \"title\"");
  rec.title = title->get<std::string>();

  auto year = obj.find("year");
  if (year == obj.end() || !year->is_number_integer()) throw schema("missing \"year\"");
  rec.year = year->get<int>();
  if (rec.year <= 0) throw schema("\"year\" must be positive");

  rec.venue = optional_string(obj, "venue", line).value_or("");

  if (auto authors = obj.find("authors"); authors != obj.end() && !authors->is_null()) {
    if (!authors->is_array()) throw schema("\"authors\" must be an array");
    for (const auto &a : *authors) {
      if (!a.is_object()) throw schema("author entries must be objects");
      auto name = a.find("name");
      if (name == a.end() || !name->is_string()) throw schema("author without \"name\"");
      rec.authors.push_back({name->get<std::string>(), optional_string(a, "email", line),
                             optional_string(a, "affiliation", line)});
    }
  }
  rec.topics = string_list(obj, "topics", line);
  rec.references = string_list(obj, "references", line);
  return rec;
}

bool is_blank(const std::string &s) {
  for (unsigned char c : s) {
    if (!std::isspace(c)) return false;
  }
  return true;
}

}  // namespace

std::vector<PaperRecord> load_corpus(std::istream &in) {
  std::vector<PaperRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(lineno, e.what());
    }
    PaperRecord rec = parse_record(obj, lineno);
    if (!seen.insert(rec.paper_id).second) throw DuplicateError(rec.paper_id);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string to_json_line(const PaperRecord &record) {
  json authors = json::array();
  for (const auto &a : record.authors) {
    json entry = {{"name", a.name}};
    entry["email"] = a.email ? json(*a.email) : json(nullptr);
    entry["affiliation"] = a.affiliation ? json(*a.affiliation) : json(nullptr);
    authors.push_back(std::move(entry));
  }
  json obj = {{"paper_id", record.paper_id}, {"title", record.title},
              {"year", record.year},         {"venue", record.venue},
              {"authors", authors},          {"topics", record.topics},
              {"references", record.references}};
  return obj.dump();
}

std::string normalize_name(std::string_view name) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : name) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace hinpair
