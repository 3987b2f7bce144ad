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

#include "fixtures.hpp"
#include "namedis/enhance.hpp"

namespace namedis {
namespace {

TEST(EnsembleVote, FourNodeFixture) {
  const std::vector<ClusterLabels> runs{{{0, 0, 1, 1}}, {{0, 0, 1, -1}}, {{0, 1, 2, -1}}};
  // M01 = 2/3, M23 = 1/3, all else 0; node 3 is an outlier in 2 of 3 runs.
  EXPECT_EQ(ensemble_vote(runs, 0.5).assignment, (std::vector<int>{0, 0, 1, -1}));
  EXPECT_EQ(ensemble_vote(runs, 0.7).assignment, (std::vector<int>{0, 1, 2, -1}));
  EXPECT_EQ(ensemble_vote(runs, 1.0 / 3.0).assignment, (std::vector<int>{0, 0, 1, 1}));
}

TEST(EnsembleVote, RejectsBadInput) {
  const std::vector<ClusterLabels> uneven{{{0, 0}}, {{0}}};
  EXPECT_THROW(ensemble_vote(uneven, 0.5), std::invalid_argument);
  EXPECT_THROW(ensemble_vote(std::span<const ClusterLabels>{}, 0.5), std::invalid_argument);
  const std::vector<ClusterLabels> one{{{0}}};
  EXPECT_THROW(ensemble_vote(one, 0.0), std::invalid_argument);
}

TEST(EnsembleVote, Properties) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(40));
    const int r = 1 + static_cast<int>(rng.below(6));
    std::vector<ClusterLabels> runs;
    for (int k = 0; k < r; ++k) runs.push_back({testing::random_partition(rng, n, 1 + static_cast<int>(rng.below(5)), true)});
    const double threshold = rng.uniform(0.05, 1.0);
    const auto voted = ensemble_vote(runs, threshold);
    ASSERT_EQ(voted.size(), static_cast<std::size_t>(n));

    const std::vector<ClusterLabels> same(3, runs[0]);
    EXPECT_TRUE(same_partition(ensemble_vote(same, threshold), runs[0])) << "trial " << trial;

    auto shuffled = runs;
    rng.shuffle(shuffled.begin(), shuffled.end());
    for (auto& run : shuffled) run = testing::rename_labels(run, rng);
    EXPECT_EQ(ensemble_vote(shuffled, threshold), voted);
  }
}

const char* kPostMatchFixture = R"({"name": "Wei Wang", "papers": [
  {"id": "a", "title": "alpha beta gamma delta", "keywords": ["kone", "ktwo"],
   "venue": "Vone Vtwo Vthree Vfour Vfive",
   "authors": [{"name": "Wei Wang", "org": "Orgx Orgy"}, {"name": "Ann A"}, {"name": "Ben B"},
               {"name": "Cat C"}, {"name": "Dan D"}, {"name": "Eve E"}]},
  {"id": "b", "title": "alpha beta", "keywords": ["kone"], "venue": "Vone Vtwo Vthree",
   "authors": [{"name": "Wei Wang"}]},
  {"id": "c", "title": "zeta",
   "authors": [{"name": "Wei Wang", "org": "Orgx Orgy"}, {"name": "Ann A"}, {"name": "Ben B"}]}]})";

TEST(PostMatch, HandScoredOutliers) {
  const auto cs = parse_candidate_set(kPostMatchFixture, "<test>");
  const std::vector<std::size_t> cluster{0};
  // b: title 2/4 + keywords 1/2 + venue 3/5 = 1.6; c: coauthors 2/5 + org 1 = 1.4.
  EXPECT_NEAR(match_score(cs, 1, cluster), 1.6, 1e-12);
  EXPECT_NEAR(match_score(cs, 2, cluster), 1.4, 1e-12);
  const auto out = post_match({{0, -1, -1}}, cs, PostMatchConfig{});
  EXPECT_EQ(out.assignment, (std::vector<int>{0, 0, 1}));
  EXPECT_DOUBLE_EQ(PostMatchConfig{}.score_threshold, 1.5);
}

TEST(PostMatch, IdenticalAndDisjointExtremes) {
  const auto cs = parse_candidate_set(R"({"name": "Wei Wang", "papers": [
    {"id": "a", "title": "alpha", "keywords": ["k"], "venue": "V", "authors": [{"name": "Wei Wang", "org": "O"}, {"name": "Li Na"}]},
    {"id": "b", "title": "alpha", "keywords": ["k"], "venue": "V", "authors": [{"name": "Wei Wang", "org": "O"}, {"name": "Li Na"}]},
    {"id": "c", "title": "omega", "authors": [{"name": "Wei Wang"}]}]})", "<test>");
  const std::vector<std::size_t> cluster{0};
  EXPECT_DOUBLE_EQ(match_score(cs, 1, cluster), 5.0);
  EXPECT_DOUBLE_EQ(match_score(cs, 2, cluster), 0.0);
  EXPECT_EQ(post_match({{0, -1, -1}}, cs, PostMatchConfig{}).assignment, (std::vector<int>{0, 0, 1}));
}

TEST(PostMatch, TiesGoToLowestLabel) {
  const auto cs = parse_candidate_set(R"({"name": "Wei Wang", "papers": [
    {"id": "a", "title": "alpha beta", "authors": [{"name": "Wei Wang"}]},
    {"id": "b", "title": "alpha beta", "authors": [{"name": "Wei Wang"}]},
    {"id": "c", "title": "alpha beta", "authors": [{"name": "Wei Wang"}]}]})", "<test>");
  PostMatchConfig cfg;
  cfg.score_threshold = 0.5;
  EXPECT_EQ(post_match({{4, 2, -1}}, cs, cfg).assignment, (std::vector<int>{4, 2, 2}));
}

TEST(PostMatch, PlacedOutliersDoNotRecruitOthers) {
  // c only resembles b; b joins the cluster of a during the pass, which must
  // not make c eligible.
  const auto cs = parse_candidate_set(R"({"name": "Wei Wang", "papers": [
    {"id": "a", "title": "alpha beta", "authors": [{"name": "Wei Wang"}]},
    {"id": "b", "title": "alpha beta", "venue": "Vq Vr", "authors": [{"name": "Wei Wang"}]},
    {"id": "c", "title": "omega", "venue": "Vq Vr", "authors": [{"name": "Wei Wang"}]}]})", "<test>");
  PostMatchConfig cfg;
  cfg.score_threshold = 0.9;
  EXPECT_EQ(post_match({{0, -1, -1}}, cs, cfg).assignment, (std::vector<int>{0, 0, 1}));
}

TEST(Tanimoto, EqualsJaccardOnSets) {
  Rng rng(40);
  for (int trial = 0; trial < 50; ++trial) {
    TokenSet a, b;
    for (int k = 0; k < 8; ++k) {
      if (rng.bernoulli(0.5)) a.insert("w" + std::to_string(k));
      if (rng.bernoulli(0.5)) b.insert("w" + std::to_string(k));
    }
    EXPECT_EQ(tanimoto(a, b), jaccard(a, b));
  }
}

TEST(PostMatch, Properties) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    SynthSpec spec = synth_preset_noisy();
    spec.authors_per_name = 2 + static_cast<int>(rng.below(3));
    spec.papers_per_author = 2 + static_cast<int>(rng.below(5));
    spec.seed = 500 + trial;
    const auto cs = synth_corpus(spec).front();
    const int n = static_cast<int>(cs.papers.size());
    const ClusterLabels labels{testing::random_partition(rng, n, 1 + static_cast<int>(rng.below(4)), true)};

    const auto absorbed = [&](double threshold) {
      PostMatchConfig cfg;
      cfg.score_threshold = threshold;
      const auto out = post_match(labels, cs, cfg);
      int count = 0;
      std::set<int> original;
      for (int v : labels.assignment) {
        if (v >= 0) original.insert(v);
      }
      for (int i = 0; i < n; ++i) {
        EXPECT_GE(out.assignment[i], 0);
        if (labels.assignment[i] >= 0) {
          EXPECT_EQ(out.assignment[i], labels.assignment[i]);
        } else {
          count += original.contains(out.assignment[i]);
        }
      }
      return count;
    };
    int previous = n + 1;
    for (double t : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.1}) {
      const int now = absorbed(t);
      EXPECT_LE(now, previous) << "threshold " << t;
      previous = now;
    }
    EXPECT_EQ(absorbed(5.1), 0);
  }
}

TEST(DefaultEnsemble, SixRelationConfigurations) {
  const auto spec = default_ensemble(EdgeThresholds{}, TrainConfig{});
  ASSERT_EQ(spec.members.size(), 6u);
  EXPECT_EQ(spec.members[0].thresholds.relations_string(), "coa");
  EXPECT_EQ(spec.members[1].thresholds.coa_min, 1);
  EXPECT_EQ(spec.members[2].thresholds.relations_string(), "coa,coo");
  EXPECT_DOUBLE_EQ(spec.members[2].thresholds.coo_min, 0.5);
  EXPECT_EQ(spec.members[5].thresholds.relations_string(), "coa,coo,cov");
  EXPECT_EQ(spec.members[4].thresholds.cov_min, 1);
  EXPECT_DOUBLE_EQ(spec.vote_threshold, 0.5);
}

}  // namespace
}  // namespace namedis
