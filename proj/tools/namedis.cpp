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

// namedis command-line interface.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "namedis/pipeline.hpp"
#include "namedis/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace namedis;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void error_record(const std::string& command, const char* kind, const std::string& message) {
  std::cerr << json{{"error", {{"command", command}, {"kind", kind}, {"message", message}}}}.dump() << '\n';
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw UsageError(file.string() + ": cannot read");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Flags are recorded here and applied on top of the config file, so that the
// precedence is defaults < config file < flags.
class Overrides {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& desc,
                   std::function<void(PipelineConfig&, const T&)> set) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, desc);
    apply_.push_back([opt, value, set](PipelineConfig& c) {
      if (opt->count() > 0) set(c, *value);
    });
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, const std::string& desc,
                    std::function<void(PipelineConfig&)> set) {
    CLI::Option* opt = app->add_flag(name, desc);
    apply_.push_back([opt, set](PipelineConfig& c) {
      if (opt->count() > 0) set(c);
    });
    return opt;
  }

  void apply(PipelineConfig& c) const {
    for (const auto& f : apply_) f(c);
  }

 private:
  std::vector<std::function<void(PipelineConfig&)>> apply_;
};

struct Common {
  std::string data;
  std::string synth;
  std::string split = "all";
  std::string config;
  std::string embeddings;
  std::string out = "namedis-out";
  std::string report;
  Overrides overrides;
};

void add_source(CLI::App* app, Common& c) {
  auto* data = app->add_option("--data", c.data, "Corpus directory (one JSON document per name)")
                   ->envname("NAMEDIS_DATA")
                   ->check(CLI::ExistingDirectory);
  auto* synth = app->add_option("--synth", c.synth, "Generate a synthetic corpus instead: default, clean or noisy")
                    ->check(CLI::IsMember({"default", "clean", "noisy"}));
  synth->excludes(data);
  app->add_option("--split", c.split, "Names to use: all, train, valid or test")
      ->check(CLI::IsMember({"all", "train", "valid", "test"}));
}

void add_config(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  c.overrides.add<std::uint64_t>(app, "--seed", "Root seed", [](auto& p, auto v) { p.seed = v; });
  c.overrides.add<int>(app, "--jobs", "Names processed in parallel", [](auto& p, auto v) { p.jobs = v; });
}

void add_out(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory");
}

void add_report(CLI::App* app, Common& c) {
  app->add_option("--report", c.report, "Report file (default: <out>/report.json)");
}

void add_embed_flags(CLI::App* app, Common& c) {
  app->add_option("--embeddings", c.embeddings, "Load a word table instead of training one")
      ->check(CLI::ExistingFile);
  auto& o = c.overrides;
  o.add<int>(app, "--dim", "Embedding dimension", [](auto& p, auto v) { p.embed.dim = v; });
  o.add<int>(app, "--window", "Skip-gram window", [](auto& p, auto v) { p.embed.window = v; });
  o.add<int>(app, "--negatives", "Negative samples", [](auto& p, auto v) { p.embed.negatives = v; });
  o.add<int>(app, "--embed-epochs", "Embedding epochs", [](auto& p, auto v) { p.embed.epochs = v; });
  o.add<int>(app, "--min-count", "Minimum word count", [](auto& p, auto v) { p.embed.min_count = v; });
}

void add_graph_flags(CLI::App* app, Common& c) {
  auto& o = c.overrides;
  o.add<std::string>(app, "--relations", "Enabled relations, e.g. coa,coo,cov",
                     [](auto& p, const auto& v) { p.graph.set_relations(v); });
  o.add<int>(app, "--coa-min", "CoA edge when coauthor overlap exceeds this",
             [](auto& p, auto v) { p.graph.coa_min = v; });
  o.add<double>(app, "--coo-min", "CoO edge when org Jaccard exceeds this",
                [](auto& p, auto v) { p.graph.coo_min = v; });
  o.add<int>(app, "--cov-min", "CoV edge when venue word overlap exceeds this",
             [](auto& p, auto v) { p.graph.cov_min = v; });
  o.add<double>(app, "--cov-keep-prob", "Keep probability of CoV edges",
                [](auto& p, auto v) { p.graph.cov_keep_prob = v; });
}

void add_train_flags(CLI::App* app, Common& c) {
  auto& o = c.overrides;
  o.add<double>(app, "--lambda", "Weight of the cluster loss", [](auto& p, auto v) { p.train.lambda = v; });
  o.add<int>(app, "--epochs", "Training epochs", [](auto& p, auto v) { p.train.epochs = v; });
  o.add<double>(app, "--lr", "Learning rate", [](auto& p, auto v) { p.train.lr = v; });
  o.add<double>(app, "--weight-decay", "L2 weight decay", [](auto& p, auto v) { p.train.weight_decay = v; });
  o.add<double>(app, "--ratio", "Cluster-head width as a fraction of the name's paper count",
                [](auto& p, auto v) { p.train.compression_ratio = v; });
  o.add<std::string>(app, "--objective", "joint, recon or cluster", [](auto& p, const auto& v) {
     if (v == "joint") p.train.objective = Objective::Joint;
     else if (v == "recon") p.train.objective = Objective::ReconOnly;
     else p.train.objective = Objective::ClusterOnly;
   })->check(CLI::IsMember({"joint", "recon", "cluster"}));
  o.add<double>(app, "--eps", "Density clustering radius", [](auto& p, auto v) { p.train.cluster.eps = v; });
  o.add<int>(app, "--min-samples", "Density clustering core size",
             [](auto& p, auto v) { p.train.cluster.min_samples = v; });
  o.add<std::string>(app, "--metric", "cosine or euclidean",
                     [](auto& p, const auto& v) { p.train.cluster.metric = parse_metric(v); })
      ->check(CLI::IsMember({"cosine", "euclidean"}));
}

void add_enhance_flags(CLI::App* app, Common& c) {
  auto& o = c.overrides;
  o.add<double>(app, "--vote-threshold", "Fraction of runs that must co-cluster a pair",
                [](auto& p, auto v) { p.vote_threshold = v; });
  o.add<double>(app, "--score-threshold", "Post-match acceptance score",
                [](auto& p, auto v) { p.postmatch.score_threshold = v; });
}

// Everything a command needs, resolved and validated before any write.
struct Prepared {
  PipelineConfig cfg;
  std::vector<CandidateSet> corpus;
  std::optional<VocabEmbeddings> embeddings;
  fs::path out;
  fs::path report;
  RunManifest manifest;
};

bool inside(const fs::path& child, const fs::path& parent) {
  const fs::path c = fs::weakly_canonical(child);
  const fs::path p = fs::weakly_canonical(parent);
  auto ci = c.begin();
  for (auto pi = p.begin(); pi != p.end(); ++pi, ++ci) {
    if (ci == c.end() || *ci != *pi) return false;
  }
  return true;
}

std::vector<CandidateSet> select_split(std::vector<CandidateSet> sets, const std::string& split,
                                       std::uint64_t seed) {
  if (split == "all") return sets;
  CorpusSplit s = split_by_name(sets, SplitRatios{}, derive_seed(seed, "split"));
  if (s.degenerate) return s.train;
  if (split == "train") return std::move(s.train);
  if (split == "valid") return std::move(s.valid);
  return std::move(s.test);
}

Prepared prepare(const Common& c, const std::string& command, bool needs_corpus = true) {
  Prepared p;
  if (!c.config.empty()) {
    try {
      p.cfg = apply_config_json(p.cfg, read_file(c.config));
    } catch (const std::invalid_argument& e) {
      throw UsageError(c.config + ": " + e.what());
    }
  }
  try {
    c.overrides.apply(p.cfg);
    p.cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (needs_corpus) {
    if (c.data.empty() && c.synth.empty()) throw UsageError("one of --data or --synth is required");
    if (!c.data.empty()) {
      try {
        p.corpus = load_corpus(c.data);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      if (inside(c.out, c.data)) throw UsageError("--out must not lie inside the data directory");
    } else {
      SynthSpec spec = c.synth == "noisy" ? synth_preset_noisy() : synth_preset_clean();
      spec.seed = p.cfg.seed;
      p.corpus = synth_corpus(spec);
    }
    p.corpus = select_split(std::move(p.corpus), c.split, p.cfg.seed);
    if (p.corpus.empty()) throw UsageError("the selected corpus has no names");
  }
  if (!c.embeddings.empty()) {
    try {
      p.embeddings = load_embeddings(c.embeddings);
    } catch (const std::exception& e) {
      throw UsageError(c.embeddings + ": " + e.what());
    }
  }
  p.out = c.out;
  p.report = c.report.empty() ? p.out / "report.json" : fs::path(c.report);
  p.manifest.tool_version = std::string(version());
  p.manifest.command = command;
  p.manifest.seed = p.cfg.seed;
  p.manifest.corpus_fingerprint = corpus_fingerprint(p.corpus);
  p.manifest.config_json = config_to_json(p.cfg);
  return p;
}

void write_manifest(const Prepared& p) { write_atomic(p.out / "manifest.json", manifest_to_json(p.manifest)); }

const VocabEmbeddings& embeddings_for(Prepared& p) {
  if (!p.embeddings) {
    const auto t0 = std::chrono::steady_clock::now();
    p.embeddings = train_embeddings(p.corpus, p.cfg.embed_stage());
    p.manifest.stage_seconds["embed"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return *p.embeddings;
}

// Result shell around per-name labels so the library's writers can be reused.
PipelineResult result_of(const std::vector<CandidateSet>& corpus, const std::vector<ClusterLabels>& labels,
                         const std::vector<std::string>& errors) {
  PipelineResult r;
  std::vector<PairwiseMetrics> scored;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    NameReport rep;
    rep.name = corpus[k].name;
    rep.error = errors[k];
    if (rep.error.empty()) {
      rep.final_labels = labels[k];
      if (corpus[k].truth && !corpus[k].papers.empty() && !labels[k].has_outliers()) {
        rep.metrics = pairwise_prf(corpus[k], labels[k]);
        scored.push_back(*rep.metrics);
      }
    }
    r.names.push_back(std::move(rep));
  }
  if (!scored.empty()) r.macro = macro_average(scored);
  return r;
}

void write_labels(const Prepared& p, const std::string& file, const std::vector<ClusterLabels>& labels,
                  const std::vector<std::string>& errors) {
  write_atomic(p.out / file, labels_to_json(p.corpus, result_of(p.corpus, labels, errors)));
}

void summarize(const std::string& command, const PipelineResult& r, const fs::path& out) {
  std::cout << command << ": " << r.names.size() << " names";
  int failed = 0;
  for (const auto& n : r.names) failed += !n.error.empty();
  if (failed) std::cout << ", " << failed << " failed";
  if (r.macro) {
    std::printf(", macro P %.4f R %.4f F1 %.4f", r.macro->precision, r.macro->recall, r.macro->f1);
    std::fflush(stdout);
  }
  std::cout << " -> " << out.string() << '\n';
}

int finish(const std::string& command, Prepared& p, const PipelineResult& r) {
  write_atomic(p.report, report_to_json(r, fs::absolute(p.out / "manifest.json").string()));
  write_manifest(p);
  summarize(command, r, p.out);
  for (const auto& n : r.names) {
    if (!n.error.empty()) error_record(command, "name", n.name + ": " + n.error);
  }
  return 0;
}

std::map<std::string, ClusterLabels> read_labels(const Prepared& p, const std::string& file, bool outliers) {
  try {
    return labels_from_json(p.corpus, read_file(file), outliers);
  } catch (const std::invalid_argument& e) {
    throw UsageError(file + ": " + e.what());
  }
}

int cmd_synth(const SynthSpec& spec, const std::string& out) {
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto corpus = synth_corpus(spec);
  save_corpus(corpus, out);
  std::size_t papers = 0;
  for (const auto& cs : corpus) papers += cs.papers.size();
  std::cout << "synth: " << corpus.size() << " names, " << papers << " papers -> " << out << '\n';
  return 0;
}

int cmd_embed(Prepared& p) {
  write_manifest(p);
  EmbedTrace trace;
  const auto t0 = std::chrono::steady_clock::now();
  const VocabEmbeddings emb = train_embeddings(p.corpus, p.cfg.embed_stage(), &trace);
  p.manifest.stage_seconds["embed"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  save_embeddings(emb, p.out / "embeddings.txt");
  std::string lines;
  for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e) {
    lines += json{{"epoch", e}, {"loss", trace.epoch_loss[e]}}.dump() + "\n";
  }
  write_atomic(p.out / "embed_loss.jsonl", lines);
  write_manifest(p);
  std::cout << "embed: " << emb.size() << " words x " << emb.dim() << " -> " << p.out.string() << '\n';
  return 0;
}

int cmd_graph(Prepared& p) {
  write_manifest(p);
  const VocabEmbeddings& emb = embeddings_for(p);
  json summary = json::array();
  fs::create_directories(p.out / "graphs");
  for (const auto& cs : p.corpus) {
    const RelationalGraph g = build_graph(cs, emb, p.cfg.graph, graph_seed(p.cfg.train_stage().seed, cs.name));
    write_edge_list(g, p.out / "graphs" / (cs.name + ".edges"));
    summary.push_back({{"name", cs.name},
                       {"n", g.n},
                       {"coa", g.edge_count(Relation::CoA)},
                       {"coo", g.edge_count(Relation::CoO)},
                       {"cov", g.edge_count(Relation::CoV)}});
  }
  write_atomic(p.out / "graphs.json", json{{"manifest", "manifest.json"}, {"graphs", summary}}.dump(2));
  write_manifest(p);
  std::cout << "graph: " << p.corpus.size() << " graphs -> " << p.out.string() << '\n';
  return 0;
}

int cmd_train(Prepared& p, const std::string& save_dir, const std::string& load_dir) {
  write_manifest(p);
  const VocabEmbeddings& emb = embeddings_for(p);
  const TrainConfig train = p.cfg.train_stage();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ClusterLabels> raw(p.corpus.size());
  std::vector<std::string> errors(p.corpus.size());
  PipelineResult traces;
  traces.names.resize(p.corpus.size());
  if (!load_dir.empty()) {
    parallel_for(static_cast<int>(p.corpus.size()), p.cfg.jobs, [&](int k) {
      const auto& cs = p.corpus[k];
      try {
        Checkpoint ck = load_checkpoint(fs::path(load_dir) / (cs.name + ".ckpt"));
        ck.encoder.activate_output = train.activate_output;
        const RelationalGraph g = build_graph(cs, emb, p.cfg.graph, graph_seed(train.seed, cs.name));
        raw[k] = infer_labels(g, GatEncoder(ck.encoder), ck.params, train.cluster);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    });
  } else {
    if (!save_dir.empty()) fs::create_directories(save_dir);
    auto outcomes = train_all(p.corpus, emb, p.cfg.graph, train, p.cfg.jobs);
    for (std::size_t k = 0; k < p.corpus.size(); ++k) {
      auto& o = outcomes.at(p.corpus[k].name);
      traces.names[k].name = p.corpus[k].name;
      if (!o.result) {
        errors[k] = o.error;
        continue;
      }
      raw[k] = o.result->labels;
      traces.names[k].loss_trace = o.result->loss_trace;
      if (!save_dir.empty() && o.result->params.cluster_dim() > 0 && !o.result->params.encoder.empty()) {
        save_checkpoint(o.result->params, train.heads, fs::path(save_dir) / (p.corpus[k].name + ".ckpt"));
      }
    }
  }
  p.manifest.stage_seconds["train"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<ClusterLabels> final_labels;
  for (const auto& r : raw) final_labels.push_back(finalize_labels(r));
  write_labels(p, "raw_labels.json", raw, errors);
  write_labels(p, "labels.json", final_labels, errors);
  write_atomic(p.out / "loss_trace.jsonl", loss_trace_jsonl(traces));
  return finish("train", p, result_of(p.corpus, final_labels, errors));
}

int cmd_ensemble(Prepared& p, const std::string& members_file) {
  EnsembleSpec spec;
  const TrainConfig train = p.cfg.train_stage();
  if (members_file.empty()) {
    spec = default_ensemble(p.cfg.graph, train);
  } else {
    try {
      spec = ensemble_from_json(read_file(members_file), p.cfg.graph, train);
    } catch (const std::invalid_argument& e) {
      throw UsageError(members_file + ": " + e.what());
    }
  }
  spec.vote_threshold = p.cfg.vote_threshold;
  write_manifest(p);
  const VocabEmbeddings& emb = embeddings_for(p);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ClusterLabels> raw(p.corpus.size());
  std::vector<std::string> errors(p.corpus.size());
  parallel_for(static_cast<int>(p.corpus.size()), p.cfg.jobs, [&](int k) {
    try {
      raw[k] = run_ensemble(p.corpus[k], emb, spec, derive_seed(p.cfg.ensemble_seed(), p.corpus[k].name));
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });
  p.manifest.stage_seconds["ensemble"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<ClusterLabels> final_labels;
  for (const auto& r : raw) final_labels.push_back(finalize_labels(r));
  write_labels(p, "raw_labels.json", raw, errors);
  write_labels(p, "labels.json", final_labels, errors);
  return finish("ensemble", p, result_of(p.corpus, final_labels, errors));
}

int cmd_postmatch(Prepared& p, const std::string& labels_file) {
  const auto given = read_labels(p, labels_file, true);
  write_manifest(p);
  std::vector<ClusterLabels> out(p.corpus.size());
  std::vector<std::string> errors(p.corpus.size());
  for (std::size_t k = 0; k < p.corpus.size(); ++k) {
    const auto it = given.find(p.corpus[k].name);
    if (it == given.end()) {
      errors[k] = "no labels for this name in " + labels_file;
      continue;
    }
    out[k] = post_match(it->second, p.corpus[k], p.cfg.postmatch);
  }
  write_labels(p, "labels.json", out, errors);
  return finish("postmatch", p, result_of(p.corpus, out, errors));
}

int cmd_eval(Prepared& p, const std::string& labels_file) {
  const auto given = read_labels(p, labels_file, false);
  write_manifest(p);
  std::vector<ClusterLabels> labels(p.corpus.size());
  std::vector<std::string> errors(p.corpus.size());
  for (std::size_t k = 0; k < p.corpus.size(); ++k) {
    const auto it = given.find(p.corpus[k].name);
    if (it == given.end()) {
      errors[k] = "no labels for this name in " + labels_file;
    } else if (!p.corpus[k].truth) {
      errors[k] = "no ground truth for this name";
    } else {
      labels[k] = it->second;
    }
  }
  return finish("eval", p, result_of(p.corpus, labels, errors));
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream s(text);
  for (std::string item; std::getline(s, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  return out;
}

struct GridFlags {
  std::string lambda, eps, min_samples, coa, coo, cov, ratio, seeds;
  int num_seeds = 3;
};

int cmd_sweep(Prepared& p, const GridFlags& f) {
  SweepGrid grid;
  const auto ints = [](const std::vector<double>& v) { return std::vector<int>(v.begin(), v.end()); };
  grid.lambda = parse_list(f.lambda, "--lambda-grid");
  grid.eps = parse_list(f.eps, "--eps-grid");
  grid.min_samples = ints(parse_list(f.min_samples, "--min-samples-grid"));
  grid.coa_min = ints(parse_list(f.coa, "--coa-grid"));
  grid.coo_min = parse_list(f.coo, "--coo-grid");
  grid.cov_min = ints(parse_list(f.cov, "--cov-grid"));
  grid.ratio = parse_list(f.ratio, "--ratio-grid");
  if (grid.lambda.empty() && grid.eps.empty() && grid.min_samples.empty() && grid.coa_min.empty() &&
      grid.coo_min.empty() && grid.cov_min.empty() && grid.ratio.empty()) {
    throw UsageError("sweep needs at least one non-empty grid axis");
  }
  std::vector<std::uint64_t> seeds;
  if (!f.seeds.empty()) {
    for (double s : parse_list(f.seeds, "--seeds")) seeds.push_back(static_cast<std::uint64_t>(s));
  } else {
    for (int k = 0; k < f.num_seeds; ++k) seeds.push_back(p.cfg.seed + static_cast<std::uint64_t>(k));
  }
  for (const auto& cs : p.corpus) {
    if (!cs.truth) throw UsageError("sweep needs ground truth for every name; '" + cs.name + "' has none");
  }
  write_manifest(p);
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult r = run_sweep(p.corpus, p.cfg, grid, seeds);
  p.manifest.stage_seconds["sweep"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_atomic(p.out / "sweep.json", sweep_to_json(r, "manifest.json"));
  write_manifest(p);
  std::cout << "sweep: " << r.cells.size() << " cells x " << seeds.size() << " seeds";
  for (std::size_t k = 0; k < r.cells.size(); ++k) {
    const auto& c = r.cells[k];
    std::printf("\n  lambda %.3g eps %.3g min_samples %d coa %d coo %.3g cov %d ratio %.3g  F1 %.4f%s",
                c.config.train.lambda, c.config.train.cluster.eps, c.config.train.cluster.min_samples,
                c.config.graph.coa_min, c.config.graph.coo_min, c.config.graph.cov_min,
                c.config.train.compression_ratio, c.mean.f1, k == r.best ? "  (best)" : "");
  }
  std::fflush(stdout);
  std::cout << "\n-> " << p.out.string() << '\n';
  return 0;
}

int cmd_pipeline(Prepared& p) {
  write_manifest(p);
  const VocabEmbeddings& emb = embeddings_for(p);
  const PipelineResult r = run_pipeline(p.corpus, p.cfg, &emb);
  for (const auto& [stage, s] : r.stage_seconds) {
    if (stage != "embed") p.manifest.stage_seconds[stage] = s;
  }
  std::vector<ClusterLabels> raw;
  std::vector<std::string> errors;
  for (const auto& n : r.names) {
    raw.push_back(n.raw_labels);
    errors.push_back(n.error);
  }
  write_labels(p, "raw_labels.json", raw, errors);
  write_atomic(p.out / "labels.json", labels_to_json(p.corpus, r));
  write_atomic(p.out / "loss_trace.jsonl", loss_trace_jsonl(r));
  return finish("pipeline", p, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Author name disambiguation on multi-relational paper graphs"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string command = "namedis";
  for (int k = 1; k < argc; ++k) command += std::string(" ") + argv[k];

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus with ground truth");
  std::string preset = "default";
  std::string synth_out;
  SynthSpec spec = synth_preset_clean();
  synth->add_option("--preset", preset, "default, clean or noisy")->check(CLI::IsMember({"default", "clean", "noisy"}));
  auto* s_names = synth->add_option("--names", spec.names, "Candidate names");
  auto* s_authors = synth->add_option("--authors", spec.authors_per_name, "Authors per name");
  auto* s_papers = synth->add_option("--papers", spec.papers_per_author, "Papers per author");
  auto* s_pool = synth->add_option("--coauthor-pool", spec.coauthor_pool, "Collaborators per author");
  auto* s_org = synth->add_option("--org-noise", spec.org_noise, "Probability of a foreign organization");
  auto* s_venue = synth->add_option("--venue-noise", spec.venue_noise, "Probability of a foreign venue");
  auto* s_coauth = synth->add_option("--coauthor-noise", spec.coauthor_noise, "Probability of a shared-pool coauthor");
  auto* s_seed = synth->add_option("--seed", spec.seed, "Seed");
  synth->add_option("--out", synth_out, "Corpus directory to write")->required();

  Common embed_c, graph_c, train_c, ens_c, pm_c, eval_c, sweep_c, pipe_c;

  auto* embed = app.add_subcommand("embed", "Train word embeddings on the corpus text");
  add_source(embed, embed_c);
  add_config(embed, embed_c);
  add_embed_flags(embed, embed_c);
  add_out(embed, embed_c);

  auto* graph = app.add_subcommand("graph", "Build per-name paper graphs and dump their edges");
  add_source(graph, graph_c);
  add_config(graph, graph_c);
  add_embed_flags(graph, graph_c);
  add_graph_flags(graph, graph_c);
  add_out(graph, graph_c);

  auto* train = app.add_subcommand("train", "Train one model per name and cluster its papers");
  std::string save_ckpt, load_ckpt;
  add_source(train, train_c);
  add_config(train, train_c);
  add_embed_flags(train, train_c);
  add_graph_flags(train, train_c);
  add_train_flags(train, train_c);
  add_out(train, train_c);
  add_report(train, train_c);
  auto* save_opt = train->add_option("--ckpt", save_ckpt, "Directory to save per-name checkpoints");
  train->add_option("--from-ckpt", load_ckpt, "Cluster with saved checkpoints instead of training")
      ->check(CLI::ExistingDirectory)
      ->excludes(save_opt);

  auto* ens = app.add_subcommand("ensemble", "Train several relation views per name and vote");
  std::string members;
  add_source(ens, ens_c);
  add_config(ens, ens_c);
  add_embed_flags(ens, ens_c);
  add_graph_flags(ens, ens_c);
  add_train_flags(ens, ens_c);
  add_enhance_flags(ens, ens_c);
  add_out(ens, ens_c);
  add_report(ens, ens_c);
  ens->add_option("--members", members, "Member spec file (JSON list of overrides)")->check(CLI::ExistingFile);

  auto* pm = app.add_subcommand("postmatch", "Assign outlier papers to clusters by attribute similarity");
  std::string pm_labels;
  add_source(pm, pm_c);
  add_config(pm, pm_c);
  add_enhance_flags(pm, pm_c);
  add_out(pm, pm_c);
  add_report(pm, pm_c);
  pm->add_option("--labels", pm_labels, "Labels file that may contain -1")->required()->check(CLI::ExistingFile);

  auto* ev = app.add_subcommand("eval", "Score labels against ground truth");
  std::string ev_labels;
  add_source(ev, eval_c);
  add_config(ev, eval_c);
  add_out(ev, eval_c);
  add_report(ev, eval_c);
  ev->add_option("--labels", ev_labels, "Labels file")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Evaluate a grid of settings over several seeds");
  GridFlags grid;
  sweep_c.split = "valid";
  add_source(sweep, sweep_c);
  add_config(sweep, sweep_c);
  add_embed_flags(sweep, sweep_c);
  add_graph_flags(sweep, sweep_c);
  add_train_flags(sweep, sweep_c);
  add_out(sweep, sweep_c);
  sweep->add_option("--lambda-grid", grid.lambda, "Comma-separated lambda values");
  sweep->add_option("--eps-grid", grid.eps, "Comma-separated eps values");
  sweep->add_option("--min-samples-grid", grid.min_samples, "Comma-separated min_samples values");
  sweep->add_option("--coa-grid", grid.coa, "Comma-separated CoA bounds");
  sweep->add_option("--coo-grid", grid.coo, "Comma-separated CoO bounds");
  sweep->add_option("--cov-grid", grid.cov, "Comma-separated CoV bounds");
  sweep->add_option("--ratio-grid", grid.ratio, "Comma-separated compression ratios");
  auto* seeds_opt = sweep->add_option("--seeds", grid.seeds, "Comma-separated seeds");
  sweep->add_option("--num-seeds", grid.num_seeds, "Consecutive seeds from --seed")
      ->check(CLI::PositiveNumber)
      ->excludes(seeds_opt);

  auto* pipe = app.add_subcommand("pipeline", "Run embedding, graphs, training, enhancement and evaluation");
  add_source(pipe, pipe_c);
  add_config(pipe, pipe_c);
  add_embed_flags(pipe, pipe_c);
  add_graph_flags(pipe, pipe_c);
  add_train_flags(pipe, pipe_c);
  add_enhance_flags(pipe, pipe_c);
  add_out(pipe, pipe_c);
  add_report(pipe, pipe_c);
  pipe_c.overrides.flag(pipe, "--no-enhance", "Single model: no ensemble, no post-match", [](auto& p) {
    p.ensemble = false;
    p.post_match = false;
  });
  pipe_c.overrides.flag(pipe, "--no-ensemble", "Skip the ensemble", [](auto& p) { p.ensemble = false; });
  pipe_c.overrides.flag(pipe, "--no-postmatch", "Skip post-match", [](auto& p) { p.post_match = false; });

  std::string sub = "namedis";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    for (auto* s : app.get_subcommands()) sub = s->get_name();
    error_record(sub, "usage", e.what());
    return kUsageError;
  }
  sub = app.get_subcommands().front()->get_name();

  try {
    if (synth->parsed()) {
      SynthSpec base = preset == "noisy" ? synth_preset_noisy() : synth_preset_clean();
      for (auto [opt, apply] : std::vector<std::pair<CLI::Option*, std::function<void()>>>{
               {s_names, [&] { base.names = spec.names; }},
               {s_authors, [&] { base.authors_per_name = spec.authors_per_name; }},
               {s_papers, [&] { base.papers_per_author = spec.papers_per_author; }},
               {s_pool, [&] { base.coauthor_pool = spec.coauthor_pool; }},
               {s_org, [&] { base.org_noise = spec.org_noise; }},
               {s_venue, [&] { base.venue_noise = spec.venue_noise; }},
               {s_coauth, [&] { base.coauthor_noise = spec.coauthor_noise; }},
               {s_seed, [&] { base.seed = spec.seed; }}}) {
        if (opt->count() > 0) apply();
      }
      return cmd_synth(base, synth_out);
    }
    if (embed->parsed()) {
      Prepared p = prepare(embed_c, command);
      return cmd_embed(p);
    }
    if (graph->parsed()) {
      Prepared p = prepare(graph_c, command);
      return cmd_graph(p);
    }
    if (train->parsed()) {
      Prepared p = prepare(train_c, command);
      return cmd_train(p, save_ckpt, load_ckpt);
    }
    if (ens->parsed()) {
      Prepared p = prepare(ens_c, command);
      return cmd_ensemble(p, members);
    }
    if (pm->parsed()) {
      Prepared p = prepare(pm_c, command);
      return cmd_postmatch(p, pm_labels);
    }
    if (ev->parsed()) {
      Prepared p = prepare(eval_c, command);
      return cmd_eval(p, ev_labels);
    }
    if (sweep->parsed()) {
      Prepared p = prepare(sweep_c, command);
      return cmd_sweep(p, grid);
    }
    Prepared p = prepare(pipe_c, command);
    return cmd_pipeline(p);
  } catch (const UsageError& e) {
    error_record(sub, "usage", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    error_record(sub, "runtime", e.what());
    return kRuntimeError;
  }
}
