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

#include <gtest/gtest.h>

#include <fstream>
#include <string>
#include <vector>

#include "namedis/rng.hpp"
#include "namedis/text.hpp"

namespace namedis {
namespace {

TEST(NormalizeName, ConcatenatesLowercase) {
  EXPECT_EQ(normalize_name("Li Jianrong"), "lijianrong");
  EXPECT_EQ(normalize_name("wei wang"), "weiwang");
}

TEST(NormalizeName, FoldsDiacriticsAndStripsPunctuation) {
  // J . - P . space M ü l l e r: drop '.', '-', ' '; fold ü -> u.
  EXPECT_EQ(normalize_name("J.-P. Müller"), "jpmuller");
  EXPECT_EQ(normalize_name("Ørsted, Hans"), "orstedhans");
  EXPECT_EQ(normalize_name("Łukasz Żak"), "lukaszzak");
  EXPECT_EQ(normalize_name("Straße"), "strasse");
}

TEST(NormalizeName, EmptyAfterNormalizationIsUnusable) {
  EXPECT_FALSE(normalize_name(" .-. ").has_value());
  EXPECT_FALSE(normalize_name("").has_value());
}

TEST(NameKey, SortedTokensMatchEitherOrder) {
  EXPECT_EQ(name_key("Li Jianrong"), "jianrongli");
  EXPECT_EQ(name_key("Jianrong Li"), "jianrongli");
  EXPECT_EQ(name_key("Müller, J.-P."), name_key("J.-P. Müller"));
}

TEST(NormalizeName, Idempotent) {
  Rng rng(5);
  const std::string alphabet = "abcXYZ .-,'éüßŁ";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const int len = 1 + static_cast<int>(rng.below(12));
    for (int i = 0; i < len; ++i) s += alphabet[rng.below(alphabet.size())];
    const auto once = normalize_name(s);
    if (!once) continue;
    EXPECT_EQ(normalize_name(*once), once) << s;
  }
}

TEST(Tokenize, SplitsOnNonWordCharacters) {
  EXPECT_EQ(tokenize("Deep-Learning for  Graphs!"), (TokenList{"deep", "learning", "for", "graphs"}));
  EXPECT_EQ(tokenize_filtered("Journal of the ACM"), (TokenList{"journal", "acm"}));
  EXPECT_TRUE(tokenize("").empty());
}

TEST(Stopwords, ListIsSortedAndQueried) {
  const auto& list = stopwords();
  EXPECT_TRUE(std::is_sorted(list.begin(), list.end()));
  EXPECT_TRUE(is_stopword("the"));
  EXPECT_FALSE(is_stopword("graph"));
}

TEST(Stopwords, DocumentedListMatches) {
  std::ifstream in(std::string(NAMEDIS_DOCS_DIR) + "/STOPWORDS.md");
  ASSERT_TRUE(in);
  std::vector<std::string> documented;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("- ", 0) == 0) documented.push_back(line.substr(2));
  }
  const auto& list = stopwords();
  EXPECT_EQ(documented, std::vector<std::string>(list.begin(), list.end()));
}

}  // namespace
}  // namespace namedis
