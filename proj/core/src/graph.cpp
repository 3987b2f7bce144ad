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

#include "namedis/graph.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "namedis/rng.hpp"

namespace namedis {

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::CoA: return "coa";
    case Relation::CoO: return "coo";
    case Relation::CoV: return "cov";
  }
  return "?";
}

Relation parse_relation(std::string_view name) {
  for (auto r : kAllRelations) {
    if (relation_name(r) == name) return r;
  }
  throw std::invalid_argument("unknown relation '" + std::string(name) + "'");
}

void EdgeThresholds::set_relations(std::string_view list) {
  enabled = {false, false, false};
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto item = list.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start);
    if (!item.empty()) set_enabled(parse_relation(item), true);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
}

std::string EdgeThresholds::relations_string() const {
  std::string out;
  for (auto r : kAllRelations) {
    if (!is_enabled(r)) continue;
    if (!out.empty()) out += ',';
    out += relation_name(r);
  }
  return out;
}

void EdgeThresholds::validate() const {
  if (coa_min < 0 || cov_min < 0) throw std::invalid_argument("overlap bounds must be >= 0");
  if (!(coo_min >= 0.0 && coo_min <= 1.0)) throw std::invalid_argument("coo_min must lie in [0, 1]");
  if (!(cov_keep_prob >= 0.0 && cov_keep_prob <= 1.0)) {
    throw std::invalid_argument("cov_keep_prob must lie in [0, 1]");
  }
}

std::size_t RelationalGraph::edge_count(Relation r) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [r](const Edge& e) { return e.relation == r; }));
}

std::size_t word_overlap(const TokenSet& a, const TokenSet& b) {
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return common;
}

double jaccard(const TokenSet& a, const TokenSet& b) {
  const std::size_t common = word_overlap(a, b);
  const std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

namespace {

TokenSet coauthor_key_set(const Paper& p, std::string_view focal_key) {
  TokenSet keys;
  for (const auto& a : p.authors) {
    if (!a.name_key.empty() && a.name_key != focal_key) keys.insert(a.name_key);
  }
  return keys;
}

}  // namespace

std::size_t coauthor_overlap(const Paper& p, const Paper& q, std::string_view focal_key) {
  return word_overlap(coauthor_key_set(p, focal_key), coauthor_key_set(q, focal_key));
}

double pair_draw(std::uint64_t seed, int i, int j) {
  const auto lo = static_cast<std::uint64_t>(std::min(i, j));
  const auto hi = static_cast<std::uint64_t>(std::max(i, j));
  return to_unit(mix64(derive_seed(seed, "cov") ^ mix64((lo << 32) | hi)));
}

RelationalGraph build_graph(const CandidateSet& cs, Eigen::MatrixXd features,
                            const EdgeThresholds& th, std::uint64_t seed) {
  th.validate();
  const int n = static_cast<int>(cs.papers.size());
  if (features.rows() != n) throw std::invalid_argument("feature rows must match paper count");

  RelationalGraph g;
  g.n = n;
  g.features = std::move(features);
  g.adjacency = Eigen::MatrixXd::Identity(n, n);

  std::vector<TokenSet> coauthors(n);
  std::vector<const TokenSet*> orgs(n);
  for (int i = 0; i < n; ++i) {
    coauthors[i] = coauthor_key_set(cs.papers[i], cs.name_key);
    orgs[i] = &cs.focal_org(static_cast<std::size_t>(i));
  }

  const auto link = [&](int i, int j, Relation r, double w) {
    g.edges.push_back({i, j, r, w});
    g.adjacency(i, j) = 1.0;
    g.adjacency(j, i) = 1.0;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (th.is_enabled(Relation::CoA)) {
        const auto overlap = word_overlap(coauthors[i], coauthors[j]);
        if (overlap > static_cast<std::size_t>(th.coa_min)) {
          link(i, j, Relation::CoA, static_cast<double>(overlap));
        }
      }
      if (th.is_enabled(Relation::CoO)) {
        const double s = jaccard(*orgs[i], *orgs[j]);
        if (s > th.coo_min) link(i, j, Relation::CoO, s);
      }
      if (th.is_enabled(Relation::CoV)) {
        const auto overlap = word_overlap(cs.papers[i].venue_tokens, cs.papers[j].venue_tokens);
        if (overlap > static_cast<std::size_t>(th.cov_min) && pair_draw(seed, i, j) < th.cov_keep_prob) {
          link(i, j, Relation::CoV, static_cast<double>(overlap));
        }
      }
    }
  }
  return g;
}

RelationalGraph build_graph(const CandidateSet& cs, const VocabEmbeddings& emb,
                            const EdgeThresholds& th, std::uint64_t seed) {
  const int n = static_cast<int>(cs.papers.size());
  Eigen::MatrixXd x(n, emb.dim());
  for (int i = 0; i < n; ++i) x.row(i) = paper_embedding(cs.papers[i], emb).transpose();
  return build_graph(cs, std::move(x), th, seed);
}

void write_edge_list(const RelationalGraph& g, const std::filesystem::path& file) {
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot write");
    out << "# n=" << g.n << '\n';
    for (const auto& e : g.edges) {
      out << e.i << ' ' << e.j << ' ' << relation_name(e.relation) << ' ' << e.weight << '\n';
    }
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace namedis
