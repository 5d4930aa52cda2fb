/*
 * Copyright 2026 The KCF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "kcf/interactions.h"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace kcf {

std::int32_t LabelIndex::Intern(std::string_view label) {
  auto it = ids_.find(std::string(label));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(labels_.size());
  labels_.emplace_back(label);
  ids_.emplace(labels_.back(), id);
  return id;
}

std::optional<std::int32_t> LabelIndex::Find(std::string_view label) const {
  auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool InteractionSet::Add(std::string_view user, std::string_view item) {
  const UserId u = users.Intern(user);
  const ItemId i = items.Intern(item);
  const std::uint64_t key =
      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
      static_cast<std::uint32_t>(i);
  if (!seen_.emplace(key, 0).second) return false;
  records.emplace_back(u, i);
  return true;
}

namespace {

std::string DetectDelimiter(std::string_view line) {
  if (line.find("::") != std::string_view::npos) return "::";
  if (line.find('\t') != std::string_view::npos) return "\t";
  if (line.find(',') != std::string_view::npos) return ",";
  // A single space means "split on runs of whitespace".
  return " ";
}

void SplitFields(std::string_view line, const std::string& delimiter,
                 std::vector<std::string_view>* fields) {
  fields->clear();
  if (delimiter == " ") {
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
        ++pos;
      }
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      fields->push_back(line.substr(pos, end - pos));
      pos = end;
    }
    return;
  }
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = line.find(delimiter, pos);
    std::string_view field = line.substr(pos, end == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : end - pos);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
      field.remove_prefix(1);
    }
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) {
      field.remove_suffix(1);
    }
    fields->push_back(field);
    if (end == std::string_view::npos) break;
    pos = end + delimiter.size();
  }
}

}  // namespace

InteractionSet ParseInteractions(std::istream& in, const TextFormat& format,
                                 std::optional<double> threshold) {
  InteractionSet result;
  std::string delimiter = format.delimiter;
  std::string raw;
  std::vector<std::string_view> fields;
  std::int64_t line_number = 0;
  bool header_pending = format.skip_header;
  const int needed =
      1 + std::max({format.user_column, format.item_column,
                    threshold ? format.rating_column : 0});

  while (std::getline(in, raw)) {
    ++line_number;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (delimiter.empty()) delimiter = DetectDelimiter(line);

    SplitFields(line, delimiter, &fields);
    if (fields.size() < 2 || static_cast<int>(fields.size()) < needed) {
      throw ParseError("expected at least " + std::to_string(needed) +
                           " columns, found " + std::to_string(fields.size()),
                       line_number);
    }
    const std::string_view user = fields[format.user_column];
    const std::string_view item = fields[format.item_column];
    if (user.empty() || item.empty()) {
      throw ParseError("empty user or item field", line_number);
    }
    if (threshold) {
      const std::string_view text = fields[format.rating_column];
      double rating = 0.0;
      const auto [ptr, ec] =
          std::from_chars(text.data(), text.data() + text.size(), rating);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("rating is not a number: '" + std::string(text) + "'",
                         line_number);
      }
      if (rating < *threshold) continue;
    }
    result.Add(user, item);
  }
  if (result.records.empty()) {
    throw EmptyDatasetError("no interactions retained");
  }
  return result;
}

InteractionSet LoadInteractions(const std::string& path,
                                const TextFormat& format,
                                std::optional<double> threshold) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  return ParseInteractions(in, format, threshold);
}

}  // namespace kcf
