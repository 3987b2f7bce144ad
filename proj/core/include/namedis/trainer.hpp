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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "namedis/cluster.hpp"
#include "namedis/corpus.hpp"
#include "namedis/embed.hpp"
#include "namedis/graph.hpp"
#include "namedis/model.hpp"

namespace namedis {

enum class Objective {
  Joint,        // lambda * L_cluster + (1 - lambda) * L_recon
  ReconOnly,    // L_recon
  ClusterOnly,  // L_cluster
};

struct TrainConfig {
  double lambda = 0.5;
  int epochs = 50;
  double lr = 1e-3;
  double weight_decay = 1e-4;
  int hidden1 = 128;
  int hidden2 = 128;
  int heads = 4;
  double compression_ratio = 1.0;
  ClusterConfig cluster;
  Objective objective = Objective::Joint;
  bool activate_output = true;
  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

/// Cluster-head width for an n-node graph: round(ratio * n), at least 1.
int cluster_head_size(double ratio, int n);

struct EpochLoss {
  double recon = 0.0;
  double cluster = 0.0;
  double total = 0.0;  // the objective actually minimized
};

struct TrainResult {
  ClusterLabels labels;  // pseudo-labels of the last epoch, -1 = outlier
  std::vector<EpochLoss> loss_trace;
  ModelParams params;
};

struct EpochView {
  int epoch;
  const EpochLoss& loss;
  const ClusterLabels& pseudo_labels;
  const Eigen::MatrixXd& hidden;
  const ModelParams& params;  // gradients populated, update not yet applied
};

using EpochObserver = std::function<void(const EpochView&)>;

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full-batch joint training on one name's graph: every epoch runs the encoder,
/// clusters the hidden representations into pseudo-labels (no gradient through
/// them), evaluates both losses and applies one Adam step.
TrainResult train_name(const RelationalGraph& g, const TrainConfig& cfg,
                       const EpochObserver& observer = {});

/// Forward pass with fixed parameters followed by clustering of the hidden
/// representations; no training.
ClusterLabels infer_labels(const RelationalGraph& g, const Encoder& encoder,
                           const ModelParams& params, const ClusterConfig& cluster);

struct NameOutcome {
  std::optional<TrainResult> result;
  std::string error;  // set when training this name failed
  double seconds = 0.0;
};

/// Builds a graph and trains an independent model for every candidate set, up
/// to `jobs` names at a time. Graph and training seeds derive from cfg.seed and
/// the name, so results do not depend on scheduling.
std::map<std::string, NameOutcome> train_all(const std::vector<CandidateSet>& sets,
                                             const VocabEmbeddings& emb,
                                             const EdgeThresholds& thresholds,
                                             const TrainConfig& cfg, int jobs = 1);

std::uint64_t graph_seed(std::uint64_t root, const std::string& name);
std::uint64_t train_seed(std::uint64_t root, const std::string& name);

/// Runs `count` indexed tasks on up to `jobs` threads.
void parallel_for(int count, int jobs, const std::function<void(int)>& task);

}  // namespace namedis
