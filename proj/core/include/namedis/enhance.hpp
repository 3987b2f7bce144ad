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

#include <array>
#include <map>
#include <span>
#include <vector>

#include "namedis/corpus.hpp"
#include "namedis/embed.hpp"
#include "namedis/graph.hpp"
#include "namedis/trainer.hpp"

namespace namedis {

struct EnsembleMember {
  EdgeThresholds thresholds;
  TrainConfig train;
};

struct EnsembleSpec {
  std::vector<EnsembleMember> members;
  double vote_threshold = 0.5;

  void validate() const;
};

/// Six members sweeping relation views: CoA at overlap bounds {0, 1}, CoA+CoO
/// at CoO bounds {0.5, 0.6}, CoA+CoO+CoV at CoV bounds {1, 2}. Other
/// thresholds follow `base`.
EnsembleSpec default_ensemble(const EdgeThresholds& base, const TrainConfig& train);

/// Consensus over runs aligned to the same papers. Pairs placed in the same
/// non-outlier cluster by at least vote_threshold of the runs are linked; the
/// connected components are the consensus clusters. A singleton whose paper
/// was an outlier in a majority of runs stays -1.
ClusterLabels ensemble_vote(std::span<const ClusterLabels> runs, double vote_threshold);

/// Trains every member on the candidate set and votes over their labels.
ClusterLabels run_ensemble(const CandidateSet& cs, const VocabEmbeddings& emb,
                           const EnsembleSpec& spec, std::uint64_t seed,
                           std::vector<ClusterLabels>* member_labels = nullptr);

struct PostMatchConfig {
  double score_threshold = 1.5;

  void validate() const;
};

/// Tanimoto coefficient on token sets; identical to jaccard().
double tanimoto(const TokenSet& a, const TokenSet& b);

/// Per-attribute similarity of two papers: title tokens, keywords, coauthor
/// keys, venue tokens and focal org tokens, each in [0, 1].
std::array<double, 5> attribute_similarity(const CandidateSet& cs, std::size_t a, std::size_t b);

/// Post-match score of paper `p` against the members of one cluster: the sum
/// over attributes of the best member similarity.
double match_score(const CandidateSet& cs, std::size_t p, std::span<const std::size_t> members);

/// Assigns each outlier (in paper order, single pass) to its best-scoring
/// existing cluster when the score reaches the threshold; otherwise it becomes
/// a new singleton. Cluster membership is frozen during the pass.
ClusterLabels post_match(const ClusterLabels& labels, const CandidateSet& cs,
                         const PostMatchConfig& cfg);

}  // namespace namedis
