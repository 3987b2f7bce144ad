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

#include <memory>
#include <string_view>

#include <Eigen/Core>

#include "namedis/corpus.hpp"

namespace namedis {

enum class Metric { Cosine, Euclidean };

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

struct ClusterConfig {
  double eps = 0.1;
  int min_samples = 4;
  Metric metric = Metric::Cosine;

  void validate() const;
  bool operator==(const ClusterConfig&) const = default;
};

/// Pairwise distances. Cosine distance is 1 - u_i . u_j on L2-normalized
/// rows; entries involving an all-zero row are +infinity (never neighbours).
Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& points, Metric metric);

/// Density clustering. A point is core when at least min_samples points
/// (itself included) lie within eps; clusters are grown from core points in
/// index order, and a border point joins the first cluster that reaches it.
/// Unreached points get -1. Labels are canonicalized by first occurrence.
ClusterLabels dbscan(const Eigen::MatrixXd& points, const ClusterConfig& cfg);

/// Interface for swapping in other clustering algorithms.
class Clusterer {
 public:
  virtual ~Clusterer() = default;
  virtual ClusterLabels cluster(const Eigen::MatrixXd& points) const = 0;
};

class DbscanClusterer final : public Clusterer {
 public:
  explicit DbscanClusterer(ClusterConfig cfg) : cfg_(cfg) { cfg_.validate(); }
  ClusterLabels cluster(const Eigen::MatrixXd& points) const override { return dbscan(points, cfg_); }

 private:
  ClusterConfig cfg_;
};

/// Y_ij = 1 iff labels i and j are equal; all -1 labels count as one cluster.
Eigen::MatrixXd labels_to_adjacency(const ClusterLabels& labels);

/// Replaces each -1 by a fresh singleton id (max label + 1, + 2, ...).
ClusterLabels finalize_labels(const ClusterLabels& labels);

/// True when the labelings induce the same partition, outliers matching outliers.
bool same_partition(const ClusterLabels& a, const ClusterLabels& b);

}  // namespace namedis
