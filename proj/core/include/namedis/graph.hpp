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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "namedis/corpus.hpp"
#include "namedis/embed.hpp"

namespace namedis {

enum class Relation : std::uint8_t { CoA = 0, CoO = 1, CoV = 2 };

constexpr std::array<Relation, 3> kAllRelations{Relation::CoA, Relation::CoO, Relation::CoV};

std::string_view relation_name(Relation r);
Relation parse_relation(std::string_view name);

/// Strict lower bounds: an edge exists when similarity > bound.
struct EdgeThresholds {
  int coa_min = 0;
  double coo_min = 0.6;
  int cov_min = 2;
  double cov_keep_prob = 0.1;
  std::array<bool, 3> enabled{true, true, true};

  bool is_enabled(Relation r) const { return enabled[static_cast<std::size_t>(r)]; }
  void set_enabled(Relation r, bool on) { enabled[static_cast<std::size_t>(r)] = on; }
  // Comma-separated relation list, e.g. "coa,coo".
  void set_relations(std::string_view list);
  std::string relations_string() const;
  void validate() const;

  bool operator==(const EdgeThresholds&) const = default;
};

struct Edge {
  int i;
  int j;
  Relation relation;
  double weight;  // raw similarity, for diagnostics only

  bool operator==(const Edge&) const = default;
};

struct RelationalGraph {
  int n = 0;
  Eigen::MatrixXd features;   // n x d
  std::vector<Edge> edges;    // i < j, at most one per (i, j, relation)
  Eigen::MatrixXd adjacency;  // n x n, 0/1, symmetric, unit diagonal

  std::size_t edge_count(Relation r) const;
};

std::size_t word_overlap(const TokenSet& a, const TokenSet& b);
double jaccard(const TokenSet& a, const TokenSet& b);

/// Overlap of the two papers' coauthor name keys, excluding the focal key.
std::size_t coauthor_overlap(const Paper& p, const Paper& q, std::string_view focal_key);

/// Deterministic uniform draw in [0, 1) for the co-venue keep test on pair (i, j).
double pair_draw(std::uint64_t seed, int i, int j);

/// Builds the multi-relational paper graph of one candidate set. Performs one
/// evaluation per unordered pair.
RelationalGraph build_graph(const CandidateSet& cs, const VocabEmbeddings& emb,
                            const EdgeThresholds& th, std::uint64_t seed);

/// Same edge rules over precomputed features (one row per paper).
RelationalGraph build_graph(const CandidateSet& cs, Eigen::MatrixXd features,
                            const EdgeThresholds& th, std::uint64_t seed);

/// Text dump: one `i j relation weight` line per edge.
void write_edge_list(const RelationalGraph& g, const std::filesystem::path& file);

}  // namespace namedis
