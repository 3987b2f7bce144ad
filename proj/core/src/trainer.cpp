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

#include "namedis/trainer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "namedis/rng.hpp"

namespace namedis {

void TrainConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (weight_decay < 0.0) throw std::invalid_argument("weight_decay must be >= 0");
  if (!(compression_ratio > 0.0)) throw std::invalid_argument("compression ratio must be positive");
  if (hidden1 < 1 || hidden2 < 1 || heads < 1 || hidden1 % heads != 0) {
    throw std::invalid_argument("hidden sizes must be positive and hidden1 divisible by heads");
  }
  cluster.validate();
}

int cluster_head_size(double ratio, int n) {
  return std::max(1, static_cast<int>(std::lround(ratio * n)));
}

TrainResult train_name(const RelationalGraph& g, const TrainConfig& cfg,
                       const EpochObserver& observer) {
  cfg.validate();
  TrainResult result;
  if (g.n == 0) return result;
  for (Eigen::Index row = 0; row < g.features.rows(); ++row) {
    if (!g.features.row(row).allFinite()) {
      throw TrainingError("non-finite input features at node " + std::to_string(row));
    }
  }

  GatConfig enc_cfg;
  enc_cfg.input_dim = static_cast<int>(g.features.cols());
  enc_cfg.hidden1 = cfg.hidden1;
  enc_cfg.hidden2 = cfg.hidden2;
  enc_cfg.heads = cfg.heads;
  enc_cfg.activate_output = cfg.activate_output;
  const GatEncoder encoder(enc_cfg);

  result.params = init_params(encoder, cluster_head_size(cfg.compression_ratio, g.n), cfg.seed);
  const AdamConfig adam{cfg.lr, cfg.weight_decay};
  const DbscanClusterer clusterer(cfg.cluster);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    ad::Tape tape;
    const BoundParams bound = bind(tape, result.params);
    ForwardPass pass = forward(tape, encoder, bound, g.features, g.adjacency);
    const Eigen::MatrixXd hidden = pass.h.value();
    if (!hidden.allFinite()) {
      Eigen::Index row = 0;
      for (; row < hidden.rows() && hidden.row(row).allFinite(); ++row) {
      }
      throw TrainingError("epoch " + std::to_string(epoch) + ": non-finite encoder output at node " +
                          std::to_string(row));
    }

    // Pseudo-labels: a pure read of the current hidden representations.
    result.labels = clusterer.cluster(hidden);
    const Eigen::MatrixXd targets = labels_to_adjacency(result.labels);

    const ad::Var l_recon = recon_loss(pass.a_logits, g.adjacency);
    const ad::Var l_cluster = cluster_loss(pass.cmat, targets);
    ad::Var objective;
    switch (cfg.objective) {
      case Objective::Joint:
        objective = ad::add(ad::scale(l_cluster, cfg.lambda), ad::scale(l_recon, 1.0 - cfg.lambda));
        break;
      case Objective::ReconOnly:
        objective = l_recon;
        break;
      case Objective::ClusterOnly:
        objective = l_cluster;
        break;
    }
    EpochLoss loss{l_recon.value()(0, 0), l_cluster.value()(0, 0), objective.value()(0, 0)};
    if (!std::isfinite(loss.total)) {
      std::ostringstream msg;
      msg << "epoch " << epoch << ": non-finite loss (recon=" << loss.recon
          << ", cluster=" << loss.cluster << ")";
      throw TrainingError(msg.str());
    }
    result.loss_trace.push_back(loss);

    tape.backward(objective);
    collect_gradients(bound, result.params);
    if (observer) observer(EpochView{epoch, result.loss_trace.back(), result.labels, hidden, result.params});
    try {
      optimizer_step(result.params, adam);
    } catch (const NumericError& e) {
      throw TrainingError("epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }
  return result;
}

ClusterLabels infer_labels(const RelationalGraph& g, const Encoder& encoder,
                           const ModelParams& params, const ClusterConfig& cluster) {
  if (g.n == 0) return {};
  ad::Tape tape;
  const BoundParams bound = bind(tape, params);
  const ForwardPass pass = forward(tape, encoder, bound, g.features, g.adjacency);
  return dbscan(pass.h.value(), cluster);
}

std::uint64_t graph_seed(std::uint64_t root, const std::string& name) {
  return derive_seed(root, "graph:" + name);
}

std::uint64_t train_seed(std::uint64_t root, const std::string& name) {
  return derive_seed(root, "train:" + name);
}

void parallel_for(int count, int jobs, const std::function<void(int)>& task) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& t : workers) t.join();
}

std::map<std::string, NameOutcome> train_all(const std::vector<CandidateSet>& sets,
                                             const VocabEmbeddings& emb,
                                             const EdgeThresholds& thresholds,
                                             const TrainConfig& cfg, int jobs) {
  std::vector<NameOutcome> outcomes(sets.size());
  parallel_for(static_cast<int>(sets.size()), jobs, [&](int k) {
    const auto& cs = sets[k];
    const auto start = std::chrono::steady_clock::now();
    try {
      const RelationalGraph g = build_graph(cs, emb, thresholds, graph_seed(cfg.seed, cs.name));
      TrainConfig local = cfg;
      local.seed = train_seed(cfg.seed, cs.name);
      outcomes[k].result = train_name(g, local);
    } catch (const std::exception& e) {
      outcomes[k].error = e.what();
    }
    outcomes[k].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  std::map<std::string, NameOutcome> out;
  for (std::size_t k = 0; k < sets.size(); ++k) out.emplace(sets[k].name, std::move(outcomes[k]));
  return out;
}

}  // namespace namedis
