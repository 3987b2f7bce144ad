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
#include <string>
#include <vector>

#include "namedis/corpus.hpp"
#include "namedis/embed.hpp"
#include "namedis/enhance.hpp"
#include "namedis/graph.hpp"
#include "namedis/metrics.hpp"
#include "namedis/trainer.hpp"

namespace namedis {

std::string_view version();

/// Every setting of an end-to-end run. Precedence when assembled by the CLI:
/// defaults, then a JSON config file, then flags.
struct PipelineConfig {
  std::uint64_t seed = 1;
  EmbedConfig embed;
  EdgeThresholds graph;
  TrainConfig train;
  bool ensemble = true;
  double vote_threshold = 0.5;
  bool post_match = true;
  PostMatchConfig postmatch;
  int jobs = 1;

  void validate() const;
  // Seeds of the embedding, graph/training and ensemble stages, all derived
  // from `seed`.
  EmbedConfig embed_stage() const;
  TrainConfig train_stage() const;
  std::uint64_t ensemble_seed() const;
};

std::string config_to_json(const PipelineConfig& cfg);
/// Applies the keys present in `json_text` on top of `base`. Unknown keys are
/// rejected.
PipelineConfig apply_config_json(PipelineConfig base, const std::string& json_text);

struct NameReport {
  std::string name;
  ClusterLabels raw_labels;    // before outlier handling (may contain -1)
  ClusterLabels final_labels;  // total partition
  std::vector<EpochLoss> loss_trace;  // single-model runs only
  std::optional<PairwiseMetrics> metrics;
  std::string error;
  double seconds = 0.0;
};

struct PipelineResult {
  std::vector<NameReport> names;
  std::optional<MacroMetrics> macro;
  std::map<std::string, double> stage_seconds;
};

/// embed -> graphs -> per-name training -> [ensemble, post-match] -> metrics.
/// `embeddings` skips the embedding stage when given.
PipelineResult run_pipeline(const std::vector<CandidateSet>& corpus, const PipelineConfig& cfg,
                            const VocabEmbeddings* embeddings = nullptr);

/// Settings grid; an empty axis keeps the base configuration's value.
struct SweepGrid {
  std::vector<double> lambda;
  std::vector<double> eps;
  std::vector<int> min_samples;
  std::vector<int> coa_min;
  std::vector<double> coo_min;
  std::vector<int> cov_min;
  std::vector<double> ratio;

  std::size_t cell_count() const;
};

struct SweepCell {
  PipelineConfig config;
  std::vector<MacroMetrics> per_seed;
  MacroMetrics mean;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::size_t best = 0;  // index of the highest mean F1
};

/// Evaluates every grid cell (single model, no ensemble/post-match unless the
/// base config enables them) on `names`, once per seed in `seeds`.
SweepResult run_sweep(const std::vector<CandidateSet>& names, const PipelineConfig& base,
                      const SweepGrid& grid, const std::vector<std::uint64_t>& seeds);

struct RunManifest {
  std::string tool_version;
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t corpus_fingerprint = 0;
  std::string config_json;
  std::map<std::string, double> stage_seconds;
};

std::string fingerprint_hex(std::uint64_t fp);

std::string manifest_to_json(const RunManifest& m);
std::string labels_to_json(const std::vector<CandidateSet>& corpus, const PipelineResult& r);
std::string report_to_json(const PipelineResult& r, const std::string& manifest_file);
std::string loss_trace_jsonl(const PipelineResult& r);
std::string sweep_to_json(const SweepResult& s, const std::string& manifest_file);

/// Reads a labels file ({name: {paper_id: cluster}}) back into labels aligned
/// with each candidate set; names absent from the file are skipped.
std::map<std::string, ClusterLabels> labels_from_json(const std::vector<CandidateSet>& corpus,
                                                      const std::string& text,
                                                      bool allow_outliers);

/// Ensemble member list as JSON: [{"relations": "coa,coo", "coo_min": 0.5, ...}].
/// Keys not given fall back to `base`.
EnsembleSpec ensemble_from_json(const std::string& text, const EdgeThresholds& base_graph,
                                const TrainConfig& base_train);

/// Writes via a temporary sibling file and rename.
void write_atomic(const std::filesystem::path& file, const std::string& content);

}  // namespace namedis
