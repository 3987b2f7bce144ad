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

#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"

namespace namedis {
namespace {

using testing::random_cluster_config;
using testing::random_points;

ClusterLabels oracle_labels(const Eigen::MatrixXd& x, const ClusterConfig& cfg) {
  return {oracle::dbscan(x, cfg.eps, cfg.min_samples, cfg.metric)};
}

TEST(Dbscan, TwoSeparatedBundles) {
  Rng rng(1);
  Eigen::MatrixXd x(20, 3);
  for (int i = 0; i < 20; ++i) {
    const Eigen::RowVector3d base = i < 10 ? Eigen::RowVector3d(1, 0, 0) : Eigen::RowVector3d(0, 0, 1);
    for (int j = 0; j < 3; ++j) x(i, j) = base[j] + rng.uniform(-1e-3, 1e-3);
  }
  const auto y = dbscan(x, ClusterConfig{});
  EXPECT_EQ(y.cluster_count(), 2);
  EXPECT_FALSE(y.has_outliers());
  EXPECT_EQ(y.assignment[0], 0);
  EXPECT_EQ(y.assignment[19], 1);
}

TEST(Dbscan, IsolatedPointIsOutlier) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0, 1, 0.001, 1, -0.001, 0, 1;
  ClusterConfig cfg;
  cfg.min_samples = 2;
  const auto y = dbscan(x, cfg);
  EXPECT_EQ(y.assignment, (std::vector<int>{0, 0, 0, -1}));
}

TEST(Dbscan, ZeroRowsAreOutliersUnderCosine) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(5, 2);
  x.row(0) << 1, 0;
  x.row(1) << 1, 0;
  ClusterConfig cfg;
  cfg.min_samples = 1;
  cfg.eps = 5.0;
  const auto y = dbscan(x, cfg);
  EXPECT_EQ(y.assignment, (std::vector<int>{0, 0, -1, -1, -1}));
}

TEST(Dbscan, EmptyInput) { EXPECT_EQ(dbscan(Eigen::MatrixXd(0, 3), ClusterConfig{}).size(), 0u); }

TEST(Dbscan, MatchesOracleOnRandomInstances) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(200));
    const auto x = random_points(rng, n, 2 + static_cast<int>(rng.below(4)));
    const auto cfg = random_cluster_config(rng);
    const auto got = dbscan(x, cfg);
    const auto want = oracle_labels(x, cfg);
    ASSERT_TRUE(same_partition(got, want))
        << "trial " << trial << " n=" << n << " eps=" << cfg.eps << " min=" << cfg.min_samples;
    EXPECT_EQ(got, canonicalize(got));
  }
}

TEST(Dbscan, DistanceMatrixMatchesOracle) {
  Rng rng(3);
  const auto x = random_points(rng, 30, 4);
  for (auto m : {Metric::Cosine, Metric::Euclidean}) {
    const auto d = distance_matrix(x, m);
    for (int i = 0; i < 30; ++i) {
      for (int j = 0; j < 30; ++j) EXPECT_EQ(d(i, j), oracle::distance(x, i, j, m));
    }
  }
}

// Core points in the oracle's sense, for properties that only hold there.
std::vector<bool> core_points(const Eigen::MatrixXd& x, const ClusterConfig& cfg) {
  const auto n = static_cast<int>(x.rows());
  std::vector<bool> core(n);
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int j = 0; j < n; ++j) count += oracle::distance(x, i, j, cfg.metric) <= cfg.eps;
    core[i] = count >= cfg.min_samples;
  }
  return core;
}

TEST(Dbscan, PermutationInvariantUpToBorderTies) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(120));
    const auto x = random_points(rng, n, 3);
    const auto cfg = random_cluster_config(rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm.begin(), perm.end());
    Eigen::MatrixXd xp(n, 3);
    for (int i = 0; i < n; ++i) xp.row(i) = x.row(perm[i]);
    const auto a = dbscan(x, cfg).assignment;
    const auto b = dbscan(xp, cfg).assignment;
    const auto core = core_points(x, cfg);
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(a[perm[i]] < 0, b[i] < 0);
      for (int j = 0; j < n; ++j) {
        if (core[perm[i]] && core[perm[j]]) EXPECT_EQ(a[perm[i]] == a[perm[j]], b[i] == b[j]);
      }
    }
  }
}

TEST(Dbscan, ShrinkingEpsNeverMergesCorePoints) {
  Rng rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(120));
    const auto x = random_points(rng, n, 3);
    auto large = random_cluster_config(rng);
    auto small = large;
    small.eps = large.eps * rng.uniform(0.3, 1.0);
    const auto yl = dbscan(x, large).assignment;
    const auto ys = dbscan(x, small).assignment;
    const auto core = core_points(x, small);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (core[i] && core[j] && ys[i] == ys[j]) EXPECT_EQ(yl[i], yl[j]) << "trial " << trial;
      }
    }
  }
}

TEST(LabelsToAdjacency, Examples) {
  Eigen::Matrix3d expected;
  expected << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  EXPECT_EQ(labels_to_adjacency({{0, 0, 1}}), Eigen::MatrixXd(expected));
  EXPECT_EQ(labels_to_adjacency({{-1, -1, 2}})(0, 1), 1.0);
  EXPECT_EQ(labels_to_adjacency({{3, 1, 2, 0}}), Eigen::MatrixXd::Identity(4, 4));
}

TEST(LabelsToAdjacency, IsAnEquivalenceRelation) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(25));
    const auto y = labels_to_adjacency({testing::random_partition(rng, n, 4, true)});
    EXPECT_EQ(y, y.transpose());
    EXPECT_EQ(y.diagonal(), Eigen::VectorXd::Ones(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (y(i, j) == 1 && y(j, k) == 1) EXPECT_EQ(y(i, k), 1);
  }
}

TEST(FinalizeLabels, PromotesOutliersToSingletons) {
  EXPECT_EQ(finalize_labels({{0, -1, -1}}).assignment, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(finalize_labels({{1, 0, 1}}).assignment, (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(finalize_labels({{-1, -1, -1}}).assignment, (std::vector<int>{0, 1, 2}));
}

TEST(ClusterConfig, RejectsBadValues) {
  ClusterConfig cfg;
  cfg.eps = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = ClusterConfig{};
  cfg.min_samples = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_metric("euclidean"), Metric::Euclidean);
  EXPECT_THROW(parse_metric("manhattan"), std::invalid_argument);
}

}  // namespace
}  // namespace namedis
