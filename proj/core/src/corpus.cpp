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

#include "namedis/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "namedis/rng.hpp"

namespace namedis {

using nlohmann::json;

std::optional<std::size_t> CandidateSet::focal_author(std::size_t paper_index) const {
  const auto& authors = papers.at(paper_index).authors;
  for (std::size_t a = 0; a < authors.size(); ++a) {
    if (authors[a].name_key == name_key) return a;
  }
  return std::nullopt;
}

const TokenSet& CandidateSet::focal_org(std::size_t paper_index) const {
  static const TokenSet kEmpty;
  const auto a = focal_author(paper_index);
  return a ? papers[paper_index].authors[*a].org_tokens : kEmpty;
}

TokenSet CandidateSet::coauthor_keys(std::size_t paper_index) const {
  TokenSet keys;
  for (const auto& author : papers.at(paper_index).authors) {
    if (author.name_key != name_key) keys.insert(author.name_key);
  }
  return keys;
}

bool ClusterLabels::has_outliers() const {
  return std::find(assignment.begin(), assignment.end(), -1) != assignment.end();
}

int ClusterLabels::cluster_count() const {
  std::set<int> distinct;
  for (int y : assignment) {
    if (y >= 0) distinct.insert(y);
  }
  return static_cast<int>(distinct.size());
}

ClusterLabels canonicalize(const ClusterLabels& labels) {
  std::map<int, int> rename;
  ClusterLabels out;
  out.assignment.reserve(labels.size());
  for (int y : labels.assignment) {
    if (y < 0) {
      out.assignment.push_back(-1);
      continue;
    }
    auto [it, inserted] = rename.try_emplace(y, static_cast<int>(rename.size()));
    out.assignment.push_back(it->second);
  }
  return out;
}

namespace {

std::string optional_string(const json& node, const char* field) {
  const auto it = node.find(field);
  if (it == node.end() || it->is_null()) return {};
  if (!it->is_string()) throw CorpusError(std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

AuthorEntry make_author(const std::string& raw, const std::string& org) {
  AuthorEntry a;
  a.name_raw = raw;
  a.name_norm = normalize_name(raw).value_or("");
  a.name_key = name_key(raw).value_or("");
  a.org_raw = org;
  a.org_tokens = to_set(tokenize(org));
  return a;
}

// Returns nullopt when the record lacks its title or authors.
std::optional<Paper> parse_paper(const json& node, LoadStats& stats) {
  if (!node.is_object()) throw CorpusError("paper record is not an object");
  const auto id = node.find("id");
  if (id == node.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw CorpusError("paper record has no string 'id'");
  }
  Paper p;
  p.id = id->get<std::string>();

  const auto title = node.find("title");
  const auto authors = node.find("authors");
  if (title == node.end() || !title->is_string() || title->get<std::string>().empty() ||
      authors == node.end() || !authors->is_array() || authors->empty()) {
    ++stats.skipped_missing_field;
    return std::nullopt;
  }
  p.title_raw = title->get<std::string>();
  p.title_tokens = tokenize_filtered(p.title_raw);

  for (const auto& a : *authors) {
    if (!a.is_object()) throw CorpusError("author entry is not an object in paper '" + p.id + "'");
    const std::string raw = optional_string(a, "name");
    if (raw.empty() || !normalize_name(raw)) {
      ++stats.dropped_author_entries;
      continue;
    }
    p.authors.push_back(make_author(raw, optional_string(a, "org")));
  }
  if (p.authors.empty()) {
    ++stats.skipped_missing_field;
    return std::nullopt;
  }

  p.venue_raw = optional_string(node, "venue");
  const auto venue = tokenize_filtered(p.venue_raw);
  p.venue_tokens = to_set(venue);

  if (const auto kw = node.find("keywords"); kw != node.end() && !kw->is_null()) {
    if (!kw->is_array()) throw CorpusError("'keywords' must be an array in paper '" + p.id + "'");
    for (const auto& k : *kw) {
      if (!k.is_string()) throw CorpusError("keyword is not a string in paper '" + p.id + "'");
      p.keywords_raw.push_back(k.get<std::string>());
      for (auto& t : tokenize(p.keywords_raw.back())) p.keyword_tokens.insert(std::move(t));
    }
  }
  if (const auto year = node.find("year"); year != node.end() && !year->is_null()) {
    if (!year->is_number_integer()) throw CorpusError("'year' must be an integer in paper '" + p.id + "'");
    p.year = year->get<int>();
  }
  if (const auto abs = node.find("abstract"); abs != node.end() && !abs->is_null()) {
    if (!abs->is_string()) throw CorpusError("'abstract' must be a string in paper '" + p.id + "'");
    p.abstract_tokens = tokenize_filtered(abs->get<std::string>());
  }
  return p;
}

}  // namespace

CandidateSet parse_candidate_set(const std::string& text, const std::string& locator,
                                 LoadStats* stats_out) {
  LoadStats local;
  LoadStats& stats = stats_out ? *stats_out : local;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CorpusError(locator + ": " + e.what());
  }
  if (!doc.is_object()) throw CorpusError(locator + ": top level must be an object");

  CandidateSet cs;
  try {
    const auto name = doc.find("name");
    if (name == doc.end() || !name->is_string()) throw CorpusError("missing string 'name'");
    cs.display_name = name->get<std::string>();
    const auto norm = normalize_name(cs.display_name);
    const auto key = name_key(cs.display_name);
    if (!norm || !key) throw CorpusError("'name' is empty after normalization");
    cs.name = *norm;
    cs.name_key = *key;
  } catch (const CorpusError& e) {
    throw CorpusError(locator + ": " + e.what());
  }

  const auto papers = doc.find("papers");
  if (papers == doc.end() || !papers->is_array()) {
    throw CorpusError(locator + ": missing array 'papers'");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < papers->size(); ++i) {
    std::optional<Paper> p;
    try {
      p = parse_paper((*papers)[i], stats);
    } catch (const CorpusError& e) {
      throw CorpusError(locator + ": papers[" + std::to_string(i) + "]: " + e.what());
    }
    if (!p) continue;
    if (!seen.insert(p->id).second) {
      throw CorpusError(locator + ": duplicate paper id '" + p->id + "'");
    }
    const bool has_focal = std::any_of(p->authors.begin(), p->authors.end(),
                                       [&](const AuthorEntry& a) { return a.name_key == cs.name_key; });
    if (!has_focal) {
      ++stats.skipped_no_focal_author;
      continue;
    }
    cs.papers.push_back(std::move(*p));
  }
  std::sort(cs.papers.begin(), cs.papers.end(),
            [](const Paper& a, const Paper& b) { return a.id < b.id; });
  stats.papers += cs.papers.size();

  if (const auto truth = doc.find("truth"); truth != doc.end() && !truth->is_null()) {
    if (!truth->is_object()) throw CorpusError(locator + ": 'truth' must be an object");
    std::map<std::string, std::string> map;
    for (const auto& p : cs.papers) {
      const auto it = truth->find(p.id);
      if (it == truth->end() || !it->is_string()) {
        throw CorpusError(locator + ": truth has no author for paper '" + p.id + "'");
      }
      map.emplace(p.id, it->get<std::string>());
    }
    cs.truth = std::move(map);
  }
  return cs;
}

std::vector<CandidateSet> load_corpus(const std::filesystem::path& dir, LoadStats* stats_out) {
  LoadStats local;
  LoadStats& stats = stats_out ? *stats_out : local;
  if (!std::filesystem::is_directory(dir)) {
    throw CorpusError(dir.string() + ": not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<CandidateSet> sets;
  std::set<std::string> names;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw CorpusError(file.string() + ": cannot open");
    std::stringstream buf;
    buf << in.rdbuf();
    sets.push_back(parse_candidate_set(buf.str(), file.string(), &stats));
    if (!names.insert(sets.back().name_key).second) {
      throw CorpusError(file.string() + ": name '" + sets.back().display_name + "' appears twice");
    }
    ++stats.files;
  }
  std::sort(sets.begin(), sets.end(),
            [](const CandidateSet& a, const CandidateSet& b) { return a.name < b.name; });
  if (stats.skipped_missing_field + stats.skipped_no_focal_author > 0) {
    std::cerr << "warning: skipped " << stats.skipped_missing_field
              << " papers missing title/authors and " << stats.skipped_no_focal_author
              << " papers without the block's author\n";
  }
  return sets;
}

std::string serialize_candidate_set(const CandidateSet& cs) {
  json papers = json::array();
  for (const auto& p : cs.papers) {
    json authors = json::array();
    for (const auto& a : p.authors) authors.push_back({{"name", a.name_raw}, {"org", a.org_raw}});
    json rec = {{"id", p.id},
                {"title", p.title_raw},
                {"authors", std::move(authors)},
                {"venue", p.venue_raw},
                {"keywords", p.keywords_raw}};
    rec["year"] = p.year ? json(*p.year) : json(nullptr);
    if (p.abstract_tokens) rec["abstract"] = join(*p.abstract_tokens);
    papers.push_back(std::move(rec));
  }
  json doc = {{"name", cs.display_name}, {"papers", std::move(papers)}};
  if (cs.truth) doc["truth"] = *cs.truth;
  return doc.dump(1);
}

void save_corpus(const std::vector<CandidateSet>& sets, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& cs : sets) {
    const auto target = dir / (cs.name + ".json");
    auto tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw CorpusError(tmp.string() + ": cannot write");
      out << serialize_candidate_set(cs) << '\n';
    }
    std::filesystem::rename(tmp, target);
  }
}

std::uint64_t corpus_fingerprint(const std::vector<CandidateSet>& sets) {
  std::uint64_t h = stable_hash("namedis-corpus");
  for (const auto& cs : sets) h = mix64(h ^ stable_hash(serialize_candidate_set(cs)));
  return h;
}

CorpusSplit split_by_name(const std::vector<CandidateSet>& sets, SplitRatios ratios,
                          std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.valid > 0 && ratios.test > 0)) {
    throw std::invalid_argument("split ratios must be positive");
  }
  CorpusSplit split;
  const std::size_t n = sets.size();
  if (n < 3) {
    split.train = sets;
    split.degenerate = true;
    std::cerr << "warning: " << n << " names cannot be split three ways; all go to train\n";
    return split;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(order.begin(), order.end());

  const double total = ratios.train + ratios.valid + ratios.test;
  const auto n_valid = static_cast<std::size_t>(static_cast<double>(n) * ratios.valid / total);
  const auto n_test = static_cast<std::size_t>(static_cast<double>(n) * ratios.test / total);
  const std::size_t n_train = n - n_valid - n_test;
  for (std::size_t k = 0; k < n; ++k) {
    auto& dst = k < n_train ? split.train : (k < n_train + n_valid ? split.valid : split.test);
    dst.push_back(sets[order[k]]);
  }
  const auto by_name = [](const CandidateSet& a, const CandidateSet& b) { return a.name < b.name; };
  std::sort(split.train.begin(), split.train.end(), by_name);
  std::sort(split.valid.begin(), split.valid.end(), by_name);
  std::sort(split.test.begin(), split.test.end(), by_name);
  return split;
}

}  // namespace namedis
