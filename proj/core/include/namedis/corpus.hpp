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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "namedis/text.hpp"

namespace namedis {

struct AuthorEntry {
  std::string name_raw;
  std::string name_norm;  // order-preserving, see normalize_name
  std::string name_key;   // sorted-token key, see name_key
  TokenSet org_tokens;
  std::string org_raw;

  bool operator==(const AuthorEntry&) const = default;
};

struct Paper {
  std::string id;
  std::string title_raw;
  TokenList title_tokens;  // stopword-filtered
  std::vector<AuthorEntry> authors;
  std::string venue_raw;
  TokenSet venue_tokens;  // stopword-filtered
  std::vector<std::string> keywords_raw;
  TokenSet keyword_tokens;
  std::optional<int> year;
  std::optional<TokenList> abstract_tokens;

  bool operator==(const Paper&) const = default;
};

struct CandidateSet {
  std::string name;      // normalize_name of the block name
  std::string name_key;  // sorted-token key used to find the focal author
  std::string display_name;
  std::vector<Paper> papers;
  std::optional<std::map<std::string, std::string>> truth;  // paper id -> author id

  // Index into papers[i].authors of the author being disambiguated, if any.
  std::optional<std::size_t> focal_author(std::size_t paper_index) const;
  // Org tokens of the focal author on paper i; empty when absent.
  const TokenSet& focal_org(std::size_t paper_index) const;
  // Name keys of every non-focal author on paper i.
  TokenSet coauthor_keys(std::size_t paper_index) const;

  bool operator==(const CandidateSet&) const = default;
};

/// Per-paper integer labels aligned to CandidateSet::papers; -1 is an outlier.
struct ClusterLabels {
  std::vector<int> assignment;

  std::size_t size() const { return assignment.size(); }
  bool has_outliers() const;
  // Number of distinct non-negative labels.
  int cluster_count() const;

  bool operator==(const ClusterLabels&) const = default;
};

/// Renames non-negative labels to 0..K-1 in order of first occurrence; -1 is kept.
ClusterLabels canonicalize(const ClusterLabels& labels);

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadStats {
  std::size_t files = 0;
  std::size_t papers = 0;
  std::size_t skipped_missing_field = 0;
  std::size_t skipped_no_focal_author = 0;
  std::size_t dropped_author_entries = 0;
};

/// Parses one candidate-name document (JSON text). `locator` names the
/// source in error messages.
CandidateSet parse_candidate_set(const std::string& text, const std::string& locator,
                                 LoadStats* stats = nullptr);

/// Loads every *.json file in `dir`, one candidate set per file, sorted by
/// name. Papers within a set are ordered by id.
std::vector<CandidateSet> load_corpus(const std::filesystem::path& dir, LoadStats* stats = nullptr);

std::string serialize_candidate_set(const CandidateSet& cs);

/// Writes one file per candidate set into `dir` (created if needed).
void save_corpus(const std::vector<CandidateSet>& sets, const std::filesystem::path& dir);

/// Content hash over the serialized corpus, stable across runs.
std::uint64_t corpus_fingerprint(const std::vector<CandidateSet>& sets);

struct SplitRatios {
  double train = 2.0;
  double valid = 1.0;
  double test = 1.0;
};

struct CorpusSplit {
  std::vector<CandidateSet> train;
  std::vector<CandidateSet> valid;
  std::vector<CandidateSet> test;
  bool degenerate = false;  // fewer than three names: everything went to train
};

/// Partitions names (never papers) into train/valid/test. valid and test get
/// floor(n * ratio / total); the remainder goes to train.
CorpusSplit split_by_name(const std::vector<CandidateSet>& sets, SplitRatios ratios,
                          std::uint64_t seed);

struct SynthSpec {
  int names = 1;
  int authors_per_name = 5;
  int papers_per_author = 20;
  int coauthor_pool = 8;
  double org_noise = 0.0;
  double venue_noise = 0.0;
  // Probability that a coauthor slot is drawn from a pool shared by all
  // authors of a name instead of the author's own collaborators.
  double coauthor_noise = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Zero-noise preset: one name, five authors with twenty papers each.
SynthSpec synth_preset_clean();
/// Noisy preset used for the unified-loss comparison.
SynthSpec synth_preset_noisy();

/// Generates candidate sets with ground truth. Every synthetic author owns a
/// collaborator pool (including one anchor collaborator present on each of
/// their papers when noise is zero), an organization, a small venue set and a
/// topic vocabulary.
std::vector<CandidateSet> synth_corpus(const SynthSpec& spec);

}  // namespace namedis
