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

#include <benchmark/benchmark.h>

#include "namedis/cluster.hpp"
#include "namedis/corpus.hpp"
#include "namedis/embed.hpp"
#include "namedis/graph.hpp"
#include "namedis/trainer.hpp"

namespace namedis {
namespace {

CandidateSet synth_name(int papers) {
  SynthSpec spec;
  spec.authors_per_name = 5;
  spec.papers_per_author = papers / 5;
  spec.org_noise = 0.1;
  return synth_corpus(spec).front();
}

VocabEmbeddings small_embeddings(const CandidateSet& cs) {
  EmbedConfig cfg;
  cfg.dim = 32;
  cfg.epochs = 1;
  return train_embeddings(std::vector<CandidateSet>{cs}, cfg);
}

void BM_GraphBuild(benchmark::State& state) {
  const CandidateSet cs = synth_name(static_cast<int>(state.range(0)));
  const VocabEmbeddings emb = small_embeddings(cs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_graph(cs, emb, EdgeThresholds{}, 1));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GraphBuild)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Dbscan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd points = Eigen::MatrixXd::Random(n, 64);
  ClusterConfig cfg;
  cfg.eps = 0.8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dbscan(points, cfg));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Dbscan)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->Complexity();

// Time per training epoch: each iteration trains `epochs` epochs.
void BM_TrainEpoch(benchmark::State& state) {
  const CandidateSet cs = synth_name(static_cast<int>(state.range(0)));
  const VocabEmbeddings emb = small_embeddings(cs);
  const RelationalGraph g = build_graph(cs, emb, EdgeThresholds{}, 1);
  TrainConfig cfg;
  cfg.epochs = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_name(g, cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.epochs);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TrainEpoch)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace
}  // namespace namedis
BENCHMARK_MAIN();
