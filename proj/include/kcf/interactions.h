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

#ifndef KCF_INTERACTIONS_H_
#define KCF_INTERACTIONS_H_

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kcf/errors.h"

namespace kcf {

// Bijection between opaque string labels and dense ids. Ids are assigned in
// first-seen order.
class LabelIndex {
 public:
  // Returns the id of `label`, inserting it if needed.
  std::int32_t Intern(std::string_view label);
  std::optional<std::int32_t> Find(std::string_view label) const;
  const std::string& Label(std::int32_t id) const { return labels_.at(id); }
  std::int32_t size() const { return static_cast<std::int32_t>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

// Deduplicated binary (user, item) interactions with their label maps.
struct InteractionSet {
  LabelIndex users;
  LabelIndex items;
  std::vector<std::pair<UserId, ItemId>> records;

  std::int32_t num_users() const { return users.size(); }
  std::int32_t num_items() const { return items.size(); }
  std::int64_t num_records() const {
    return static_cast<std::int64_t>(records.size());
  }

  // Adds a pair; duplicates are ignored. Returns true if it was new.
  bool Add(std::string_view user, std::string_view item);

 private:
  struct PairHash {
    std::size_t operator()(std::uint64_t key) const noexcept {
      return static_cast<std::size_t>(key * 0x9E3779B97F4A7C15ull);
    }
  };
  std::unordered_map<std::uint64_t, char, PairHash> seen_;
};

struct TextFormat {
  // Empty means autodetect from the first data line: "::", tab, comma, else
  // runs of spaces.
  std::string delimiter;
  int user_column = 0;
  int item_column = 1;
  int rating_column = 2;
  bool skip_header = false;
};

// Parses delimiter-separated text. Lines that are blank or start with '#' are
// ignored. When `threshold` is set, only pairs whose rating column is >= the
// threshold are retained. Throws ParseError on malformed lines and
// EmptyDatasetError if nothing is retained.
InteractionSet ParseInteractions(std::istream& in, const TextFormat& format,
                                 std::optional<double> threshold = {});

// As ParseInteractions, reading from `path`. Throws IoError if unreadable.
InteractionSet LoadInteractions(const std::string& path,
                                const TextFormat& format,
                                std::optional<double> threshold = {});

}  // namespace kcf

#endif  // KCF_INTERACTIONS_H_
