// Copyright 2026 The namedis Authors
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

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace namedis {

using TokenList = std::vector<std::string>;
using TokenSet = std::set<std::string>;

/// Lowercases and folds Latin diacritics to their base letters ("Müller" ->
/// "muller", "Ørsted" -> "orsted"). Code points outside the folding table are
/// passed through; invalid UTF-8 bytes are dropped.
std::string fold_lower(std::string_view text);

/// Order-preserving author-name normalization: fold_lower, then strip all
/// whitespace and punctuation. "Li Jianrong" -> "lijianrong".
/// Returns nullopt when nothing survives, which marks an unusable author entry.
std::optional<std::string> normalize_name(std::string_view raw);

/// Matching key for author names: normalize each whitespace/comma separated
/// part, sort the parts and concatenate, so "Li Jianrong" and "Jianrong Li"
/// both map to "jianrongli".
std::optional<std::string> name_key(std::string_view raw);

/// Splits folded text on anything that is not a letter or digit. Non-ASCII code
/// points count as letters.
TokenList tokenize(std::string_view text);

/// tokenize() followed by stopword removal.
TokenList tokenize_filtered(std::string_view text);

bool is_stopword(std::string_view token);

/// The shipped English stopword list, in sorted order.
const std::vector<std::string_view>& stopwords();

TokenSet to_set(const TokenList& tokens);

std::string join(const TokenList& tokens, std::string_view sep = " ");
std::string join(const TokenSet& tokens, std::string_view sep = " ");

}  // namespace namedis
