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

#include "namedis/enhance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "namedis/rng.hpp"

namespace namedis {

void EnsembleSpec::validate() const {
  if (members.empty()) throw std::invalid_argument("ensemble needs at least one member");
  if (!(vote_threshold > 0.0 && vote_threshold <= 1.0)) {
    throw std::invalid_argument("vote threshold must lie in (0, 1]");
  }
}

EnsembleSpec default_ensemble(const EdgeThresholds& base, const TrainConfig& train) {
  EnsembleSpec spec;
  const auto member = [&](std::string_view relations, auto&& tweak) {
    EdgeThresholds th = base;
    th.set_relations(relations);
    tweak(th);
    spec.members.push_back({th, train});
  };
  member("coa", [](EdgeThresholds& t) { t.coa_min = 0; });
  member("coa", [](EdgeThresholds& t) { t.coa_min = 1; });
  member("coa,coo", [](EdgeThresholds& t) { t.coo_min = 0.5; });
  member("coa,coo", [](EdgeThresholds& t) { t.coo_min = 0.6; });
  member("coa,coo,cov", [](EdgeThresholds& t) { t.cov_min = 1; });
  member("coa,coo,cov", [](EdgeThresholds& t) { t.cov_min = 2; });
  return spec;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ClusterLabels ensemble_vote(std::span<const ClusterLabels> runs, double vote_threshold) {
  if (runs.empty()) throw std::invalid_argument("ensemble_vote needs at least one run");
  if (!(vote_threshold > 0.0 && vote_threshold <= 1.0)) {
    throw std::invalid_argument("vote threshold must lie in (0, 1]");
  }
  const std::size_t n = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != n) throw std::invalid_argument("ensemble runs differ in length");
  }
  const auto r = static_cast<double>(runs.size());

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      int together = 0;
      for (const auto& run : runs) {
        const int a = run.assignment[i];
        if (a >= 0 && a == run.assignment[j]) ++together;
      }
      if (static_cast<double>(together) / r >= vote_threshold) sets.unite(i, j);
    }
  }

  std::vector<std::size_t> component_size(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++component_size[sets.find(i)];

  ClusterLabels out;
  out.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    int outlier_votes = 0;
    for (const auto& run : runs) outlier_votes += run.assignment[i] < 0 ? 1 : 0;
    const bool keep_outlier = component_size[root] == 1 && 2 * outlier_votes > static_cast<int>(runs.size());
    out.assignment[i] = keep_outlier ? -1 : static_cast<int>(root);
  }
  return canonicalize(out);
}

ClusterLabels run_ensemble(const CandidateSet& cs, const VocabEmbeddings& emb,
                           const EnsembleSpec& spec, std::uint64_t seed,
                           std::vector<ClusterLabels>* member_labels) {
  spec.validate();
  std::vector<ClusterLabels> runs;
  for (std::size_t k = 0; k < spec.members.size(); ++k) {
    const auto& m = spec.members[k];
    const std::uint64_t member_seed = derive_seed(seed, "member" + std::to_string(k));
    const RelationalGraph g = build_graph(cs, emb, m.thresholds, graph_seed(member_seed, cs.name));
    TrainConfig cfg = m.train;
    cfg.seed = train_seed(member_seed, cs.name);
    runs.push_back(train_name(g, cfg).labels);
  }
  ClusterLabels voted = ensemble_vote(runs, spec.vote_threshold);
  if (member_labels) *member_labels = std::move(runs);
  return voted;
}

void PostMatchConfig::validate() const {
  if (!(score_threshold >= 0.0)) throw std::invalid_argument("score threshold must be >= 0");
}

double tanimoto(const TokenSet& a, const TokenSet& b) { return jaccard(a, b); }

std::array<double, 5> attribute_similarity(const CandidateSet& cs, std::size_t a, std::size_t b) {
  const Paper& p = cs.papers.at(a);
  const Paper& q = cs.papers.at(b);
  return {jaccard(to_set(p.title_tokens), to_set(q.title_tokens)),
          jaccard(p.keyword_tokens, q.keyword_tokens),
          jaccard(cs.coauthor_keys(a), cs.coauthor_keys(b)),
          tanimoto(p.venue_tokens, q.venue_tokens),
          tanimoto(cs.focal_org(a), cs.focal_org(b))};
}

double match_score(const CandidateSet& cs, std::size_t p, std::span<const std::size_t> members) {
  std::array<double, 5> best{};
  for (std::size_t m : members) {
    const auto s = attribute_similarity(cs, p, m);
    for (std::size_t k = 0; k < best.size(); ++k) best[k] = std::max(best[k], s[k]);
  }
  return best[0] + best[1] + best[2] + best[3] + best[4];
}

ClusterLabels post_match(const ClusterLabels& labels, const CandidateSet& cs,
                         const PostMatchConfig& cfg) {
  cfg.validate();
  if (labels.size() != cs.papers.size()) {
    throw std::invalid_argument("post_match: labels do not align with the candidate set");
  }
  std::map<int, std::vector<std::size_t>> clusters;
  std::vector<std::size_t> outliers;
  int next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels.assignment[i];
    if (y < 0) {
      outliers.push_back(i);
    } else {
      clusters[y].push_back(i);
      next = std::max(next, y + 1);
    }
  }
  std::sort(outliers.begin(), outliers.end(), [&](std::size_t a, std::size_t b) {
    return cs.papers[a].id < cs.papers[b].id;
  });

  ClusterLabels out = labels;
  for (std::size_t p : outliers) {
    int best_label = -1;
    double best_score = -1.0;
    for (const auto& [label, members] : clusters) {
      const double s = match_score(cs, p, members);
      if (s > best_score) {
        best_score = s;
        best_label = label;
      }
    }
    out.assignment[p] = (best_label >= 0 && best_score >= cfg.score_threshold) ? best_label : next++;
  }
  return out;
}

}  // namespace namedis
