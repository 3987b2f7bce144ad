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

#include "namedis/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "namedis/rng.hpp"

#ifndef NAMEDIS_VERSION
#define NAMEDIS_VERSION "0.0.0"
#endif

namespace namedis {

using nlohmann::json;

std::string_view version() { return NAMEDIS_VERSION; }

void PipelineConfig::validate() const {
  if (embed.dim < 1 || embed.window < 1 || embed.negatives < 0 || embed.epochs < 1 ||
      embed.min_count < 1 || !(embed.learning_rate > 0.0)) {
    throw std::invalid_argument("invalid embedding settings");
  }
  graph.validate();
  train.validate();
  if (!(vote_threshold > 0.0 && vote_threshold <= 1.0)) {
    throw std::invalid_argument("vote threshold must lie in (0, 1]");
  }
  postmatch.validate();
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

EmbedConfig PipelineConfig::embed_stage() const {
  EmbedConfig e = embed;
  e.seed = derive_seed(seed, "embed");
  return e;
}

TrainConfig PipelineConfig::train_stage() const {
  TrainConfig t = train;
  t.seed = derive_seed(seed, "train");
  return t;
}

std::uint64_t PipelineConfig::ensemble_seed() const { return derive_seed(seed, "ensemble"); }

namespace {

std::string_view objective_name(Objective o) {
  switch (o) {
    case Objective::Joint: return "joint";
    case Objective::ReconOnly: return "recon";
    case Objective::ClusterOnly: return "cluster";
  }
  return "joint";
}

Objective parse_objective(std::string_view s) {
  if (s == "joint") return Objective::Joint;
  if (s == "recon") return Objective::ReconOnly;
  if (s == "cluster") return Objective::ClusterOnly;
  throw std::invalid_argument("unknown objective '" + std::string(s) + "'");
}

json config_json(const PipelineConfig& c) {
  return {
      {"seed", c.seed},
      {"embed",
       {{"dim", c.embed.dim},
        {"window", c.embed.window},
        {"negatives", c.embed.negatives},
        {"epochs", c.embed.epochs},
        {"min_count", c.embed.min_count},
        {"learning_rate", c.embed.learning_rate},
        {"include_abstracts", c.embed.include_abstracts}}},
      {"graph",
       {{"relations", c.graph.relations_string()},
        {"coa_min", c.graph.coa_min},
        {"coo_min", c.graph.coo_min},
        {"cov_min", c.graph.cov_min},
        {"cov_keep_prob", c.graph.cov_keep_prob}}},
      {"train",
       {{"lambda", c.train.lambda},
        {"epochs", c.train.epochs},
        {"lr", c.train.lr},
        {"weight_decay", c.train.weight_decay},
        {"hidden1", c.train.hidden1},
        {"hidden2", c.train.hidden2},
        {"heads", c.train.heads},
        {"compression_ratio", c.train.compression_ratio},
        {"objective", objective_name(c.train.objective)},
        {"activate_output", c.train.activate_output},
        {"cluster",
         {{"eps", c.train.cluster.eps},
          {"min_samples", c.train.cluster.min_samples},
          {"metric", metric_name(c.train.cluster.metric)}}}}},
      {"ensemble", c.ensemble},
      {"vote_threshold", c.vote_threshold},
      {"post_match", c.post_match},
      {"score_threshold", c.postmatch.score_threshold},
      {"jobs", c.jobs},
  };
}

// Reads `key` from `obj` into `out` when present; records the key as consumed.
template <class T>
void read(const json& obj, const char* key, T& out, std::set<std::string>& seen) {
  seen.insert(key);
  if (const auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

void reject_unknown(const json& obj, const std::set<std::string>& seen, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    if (!seen.contains(k)) throw std::invalid_argument("unknown config key '" + where + k + "'");
  }
}

}  // namespace

std::string config_to_json(const PipelineConfig& cfg) { return config_json(cfg).dump(2); }

PipelineConfig apply_config_json(PipelineConfig c, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  try {
    std::set<std::string> top;
    read(doc, "seed", c.seed, top);
    if (const auto e = doc.find("embed"); e != doc.end()) {
      std::set<std::string> seen;
      read(*e, "dim", c.embed.dim, seen);
      read(*e, "window", c.embed.window, seen);
      read(*e, "negatives", c.embed.negatives, seen);
      read(*e, "epochs", c.embed.epochs, seen);
      read(*e, "min_count", c.embed.min_count, seen);
      read(*e, "learning_rate", c.embed.learning_rate, seen);
      read(*e, "include_abstracts", c.embed.include_abstracts, seen);
      reject_unknown(*e, seen, "embed.");
    }
    top.insert("embed");
    if (const auto g = doc.find("graph"); g != doc.end()) {
      std::set<std::string> seen;
      std::string relations = c.graph.relations_string();
      read(*g, "relations", relations, seen);
      c.graph.set_relations(relations);
      read(*g, "coa_min", c.graph.coa_min, seen);
      read(*g, "coo_min", c.graph.coo_min, seen);
      read(*g, "cov_min", c.graph.cov_min, seen);
      read(*g, "cov_keep_prob", c.graph.cov_keep_prob, seen);
      reject_unknown(*g, seen, "graph.");
    }
    top.insert("graph");
    if (const auto t = doc.find("train"); t != doc.end()) {
      std::set<std::string> seen;
      read(*t, "lambda", c.train.lambda, seen);
      read(*t, "epochs", c.train.epochs, seen);
      read(*t, "lr", c.train.lr, seen);
      read(*t, "weight_decay", c.train.weight_decay, seen);
      read(*t, "hidden1", c.train.hidden1, seen);
      read(*t, "hidden2", c.train.hidden2, seen);
      read(*t, "heads", c.train.heads, seen);
      read(*t, "compression_ratio", c.train.compression_ratio, seen);
      read(*t, "activate_output", c.train.activate_output, seen);
      std::string objective(objective_name(c.train.objective));
      read(*t, "objective", objective, seen);
      c.train.objective = parse_objective(objective);
      if (const auto k = t->find("cluster"); k != t->end()) {
        std::set<std::string> cseen;
        read(*k, "eps", c.train.cluster.eps, cseen);
        read(*k, "min_samples", c.train.cluster.min_samples, cseen);
        std::string metric(metric_name(c.train.cluster.metric));
        read(*k, "metric", metric, cseen);
        c.train.cluster.metric = parse_metric(metric);
        reject_unknown(*k, cseen, "train.cluster.");
      }
      seen.insert("cluster");
      reject_unknown(*t, seen, "train.");
    }
    top.insert("train");
    read(doc, "ensemble", c.ensemble, top);
    read(doc, "vote_threshold", c.vote_threshold, top);
    read(doc, "post_match", c.post_match, top);
    read(doc, "score_threshold", c.postmatch.score_threshold, top);
    read(doc, "jobs", c.jobs, top);
    reject_unknown(doc, top, "");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config has a value of the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineResult run_pipeline(const std::vector<CandidateSet>& corpus, const PipelineConfig& cfg,
                            const VocabEmbeddings* embeddings) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  PipelineResult result;

  auto t0 = clock::now();
  VocabEmbeddings trained;
  if (!embeddings) {
    trained = train_embeddings(corpus, cfg.embed_stage());
    embeddings = &trained;
  }
  result.stage_seconds["embed"] = std::chrono::duration<double>(clock::now() - t0).count();

  t0 = clock::now();
  const TrainConfig train = cfg.train_stage();
  const EnsembleSpec ensemble = [&] {
    EnsembleSpec s = default_ensemble(cfg.graph, train);
    s.vote_threshold = cfg.vote_threshold;
    return s;
  }();
  result.names.resize(corpus.size());
  parallel_for(static_cast<int>(corpus.size()), cfg.jobs, [&](int k) {
    const CandidateSet& cs = corpus[k];
    NameReport& rep = result.names[k];
    rep.name = cs.name;
    const auto start = clock::now();
    try {
      if (cfg.ensemble) {
        rep.raw_labels = run_ensemble(cs, *embeddings, ensemble, derive_seed(cfg.ensemble_seed(), cs.name));
      } else {
        const RelationalGraph g = build_graph(cs, *embeddings, cfg.graph, graph_seed(train.seed, cs.name));
        TrainConfig local = train;
        local.seed = train_seed(train.seed, cs.name);
        TrainResult tr = train_name(g, local);
        rep.raw_labels = std::move(tr.labels);
        rep.loss_trace = std::move(tr.loss_trace);
      }
      rep.final_labels = cfg.post_match ? post_match(rep.raw_labels, cs, cfg.postmatch)
                                        : finalize_labels(rep.raw_labels);
      if (cs.truth && !cs.papers.empty()) rep.metrics = pairwise_prf(cs, rep.final_labels);
    } catch (const std::exception& e) {
      rep.error = e.what();
    }
    rep.seconds = std::chrono::duration<double>(clock::now() - start).count();
  });
  result.stage_seconds["train"] = std::chrono::duration<double>(clock::now() - t0).count();

  std::vector<PairwiseMetrics> scored;
  for (const auto& rep : result.names) {
    if (rep.metrics) scored.push_back(*rep.metrics);
  }
  if (!scored.empty()) result.macro = macro_average(scored);
  return result;
}

std::size_t SweepGrid::cell_count() const {
  const auto axis = [](std::size_t n) { return std::max<std::size_t>(n, 1); };
  return axis(lambda.size()) * axis(eps.size()) * axis(min_samples.size()) * axis(coa_min.size()) *
         axis(coo_min.size()) * axis(cov_min.size()) * axis(ratio.size());
}

namespace {

template <class T>
std::vector<T> axis_or(const std::vector<T>& axis, T fallback) {
  return axis.empty() ? std::vector<T>{fallback} : axis;
}

}  // namespace

SweepResult run_sweep(const std::vector<CandidateSet>& names, const PipelineConfig& base,
                      const SweepGrid& grid, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
  std::vector<PipelineConfig> configs;
  for (double lambda : axis_or(grid.lambda, base.train.lambda))
    for (double eps : axis_or(grid.eps, base.train.cluster.eps))
      for (int ms : axis_or(grid.min_samples, base.train.cluster.min_samples))
        for (int coa : axis_or(grid.coa_min, base.graph.coa_min))
          for (double coo : axis_or(grid.coo_min, base.graph.coo_min))
            for (int cov : axis_or(grid.cov_min, base.graph.cov_min))
              for (double ratio : axis_or(grid.ratio, base.train.compression_ratio)) {
                PipelineConfig c = base;
                c.train.lambda = lambda;
                c.train.cluster.eps = eps;
                c.train.cluster.min_samples = ms;
                c.graph.coa_min = coa;
                c.graph.coo_min = coo;
                c.graph.cov_min = cov;
                c.train.compression_ratio = ratio;
                c.validate();
                configs.push_back(c);
              }

  // Embeddings depend only on the seed, so they are shared across cells.
  std::vector<VocabEmbeddings> embeddings;
  for (auto s : seeds) {
    PipelineConfig c = base;
    c.seed = s;
    embeddings.push_back(train_embeddings(names, c.embed_stage()));
  }

  SweepResult out;
  for (const auto& c : configs) {
    SweepCell cell;
    cell.config = c;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      PipelineConfig run = c;
      run.seed = seeds[k];
      const auto r = run_pipeline(names, run, &embeddings[k]);
      if (!r.macro) throw std::runtime_error("sweep names carry no ground truth");
      cell.per_seed.push_back(*r.macro);
    }
    for (const auto& m : cell.per_seed) {
      cell.mean.precision += m.precision;
      cell.mean.recall += m.recall;
      cell.mean.f1 += m.f1;
      cell.mean.f1_of_means += m.f1_of_means;
    }
    const auto n = static_cast<double>(cell.per_seed.size());
    cell.mean.precision /= n;
    cell.mean.recall /= n;
    cell.mean.f1 /= n;
    cell.mean.f1_of_means /= n;
    cell.mean.names = cell.per_seed.front().names;
    out.cells.push_back(std::move(cell));
  }
  for (std::size_t k = 1; k < out.cells.size(); ++k) {
    if (out.cells[k].mean.f1 > out.cells[out.best].mean.f1) out.best = k;
  }
  return out;
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

std::string manifest_to_json(const RunManifest& m) {
  json doc = {{"tool_version", m.tool_version},
              {"command", m.command},
              {"seed", m.seed},
              {"corpus_fingerprint", fingerprint_hex(m.corpus_fingerprint)},
              {"config", json::parse(m.config_json)},
              {"stage_seconds", m.stage_seconds}};
  return doc.dump(2);
}

std::string labels_to_json(const std::vector<CandidateSet>& corpus, const PipelineResult& r) {
  json doc = json::object();
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& rep = r.names.at(k);
    if (!rep.error.empty()) continue;
    json name = json::object();
    for (std::size_t i = 0; i < corpus[k].papers.size(); ++i) {
      name[corpus[k].papers[i].id] = rep.final_labels.assignment.at(i);
    }
    doc[corpus[k].name] = std::move(name);
  }
  return doc.dump(1);
}

namespace {

json metrics_json(const PairwiseMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall},         {"f1", m.f1},
          {"pred_pairs", m.pred_pairs}, {"true_pairs", m.true_pairs}, {"hit_pairs", m.hit_pairs}};
}

json macro_json(const MacroMetrics& m) {
  return {{"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"f1_of_means", m.f1_of_means},
          {"names", m.names}};
}

}  // namespace

std::string report_to_json(const PipelineResult& r, const std::string& manifest_file) {
  json names = json::array();
  for (const auto& rep : r.names) {
    json row = {{"name", rep.name}};
    if (rep.metrics) row.update(metrics_json(*rep.metrics));
    if (!rep.error.empty()) row["error"] = rep.error;
    names.push_back(std::move(row));
  }
  json doc = {{"manifest", manifest_file}, {"names", std::move(names)}};
  doc["macro"] = r.macro ? macro_json(*r.macro) : json(nullptr);
  return doc.dump(2);
}

std::string loss_trace_jsonl(const PipelineResult& r) {
  std::string out;
  for (const auto& rep : r.names) {
    for (std::size_t e = 0; e < rep.loss_trace.size(); ++e) {
      const auto& l = rep.loss_trace[e];
      out += json{{"name", rep.name},
                  {"epoch", e},
                  {"recon", l.recon},
                  {"cluster", l.cluster},
                  {"loss", l.total}}
                 .dump();
      out += '\n';
    }
  }
  return out;
}

std::string sweep_to_json(const SweepResult& s, const std::string& manifest_file) {
  json cells = json::array();
  for (std::size_t k = 0; k < s.cells.size(); ++k) {
    const auto& c = s.cells[k];
    json per_seed = json::array();
    for (const auto& m : c.per_seed) per_seed.push_back(macro_json(m));
    cells.push_back({{"lambda", c.config.train.lambda},
                     {"eps", c.config.train.cluster.eps},
                     {"min_samples", c.config.train.cluster.min_samples},
                     {"coa_min", c.config.graph.coa_min},
                     {"coo_min", c.config.graph.coo_min},
                     {"cov_min", c.config.graph.cov_min},
                     {"ratio", c.config.train.compression_ratio},
                     {"mean", macro_json(c.mean)},
                     {"per_seed", std::move(per_seed)},
                     {"best", k == s.best}});
  }
  return json{{"manifest", manifest_file}, {"cells", std::move(cells)}, {"best", s.best}}.dump(2);
}

std::map<std::string, ClusterLabels> labels_from_json(const std::vector<CandidateSet>& corpus,
                                                      const std::string& text,
                                                      bool allow_outliers) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("labels file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("labels file must map names to label maps");
  std::map<std::string, ClusterLabels> out;
  for (const auto& cs : corpus) {
    const auto it = doc.find(cs.name);
    if (it == doc.end()) continue;
    ClusterLabels labels;
    for (const auto& p : cs.papers) {
      const auto lab = it->find(p.id);
      if (lab == it->end() || !lab->is_number_integer()) {
        throw std::invalid_argument("labels for '" + cs.name + "' miss paper '" + p.id + "'");
      }
      const int y = lab->get<int>();
      if (y < -1 || (y == -1 && !allow_outliers)) {
        throw std::invalid_argument("labels for '" + cs.name + "' contain invalid label " +
                                    std::to_string(y));
      }
      labels.assignment.push_back(y);
    }
    if (it->size() != cs.papers.size()) {
      throw std::invalid_argument("labels for '" + cs.name + "' name papers outside the corpus");
    }
    out.emplace(cs.name, std::move(labels));
  }
  return out;
}

EnsembleSpec ensemble_from_json(const std::string& text, const EdgeThresholds& base_graph,
                                const TrainConfig& base_train) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("member file is not valid JSON: ") + e.what());
  }
  const json* members = &doc;
  EnsembleSpec spec;
  if (doc.is_object()) {
    if (const auto v = doc.find("vote_threshold"); v != doc.end()) spec.vote_threshold = v->get<double>();
    const auto m = doc.find("members");
    if (m == doc.end()) throw std::invalid_argument("member file object needs a 'members' array");
    members = &*m;
  }
  if (!members->is_array()) throw std::invalid_argument("members must be an array");
  try {
    for (const auto& m : *members) {
      EnsembleMember member{base_graph, base_train};
      std::set<std::string> seen;
      std::string relations = member.thresholds.relations_string();
      read(m, "relations", relations, seen);
      member.thresholds.set_relations(relations);
      read(m, "coa_min", member.thresholds.coa_min, seen);
      read(m, "coo_min", member.thresholds.coo_min, seen);
      read(m, "cov_min", member.thresholds.cov_min, seen);
      read(m, "cov_keep_prob", member.thresholds.cov_keep_prob, seen);
      read(m, "lambda", member.train.lambda, seen);
      read(m, "epochs", member.train.epochs, seen);
      read(m, "lr", member.train.lr, seen);
      read(m, "compression_ratio", member.train.compression_ratio, seen);
      read(m, "eps", member.train.cluster.eps, seen);
      read(m, "min_samples", member.train.cluster.min_samples, seen);
      reject_unknown(m, seen, "members[].");
      member.thresholds.validate();
      member.train.validate();
      spec.members.push_back(member);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("member file has a value of the wrong type: ") + e.what());
  }
  spec.validate();
  return spec;
}

void write_atomic(const std::filesystem::path& file, const std::string& content) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot write");
    out << content;
    if (!out) throw std::runtime_error(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace namedis
