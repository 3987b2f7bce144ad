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
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "namedis/corpus.hpp"

namespace namedis {

struct PairwiseMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t pred_pairs = 0;
  std::uint64_t true_pairs = 0;
  std::uint64_t hit_pairs = 0;
};

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pairwise precision/recall/F1 over unordered paper pairs.
///
/// Degenerate denominators: with no predicted pairs precision is 0, unless the
/// truth has no pairs either, in which case P = R = F1 = 1. With no true pairs
/// (and some predicted ones) recall is 1 and precision 0.
PairwiseMetrics pairwise_prf(std::span<const std::string> ids, const ClusterLabels& pred,
                             const std::map<std::string, std::string>& truth);

PairwiseMetrics pairwise_prf(const CandidateSet& cs, const ClusterLabels& pred);

struct MacroMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;  // mean of per-name F1
  double f1_of_means = 0.0;  // harmonic mean of macro P and R, diagnostics only
  std::size_t names = 0;
};

MacroMetrics macro_average(std::span<const PairwiseMetrics> per_name);

}  // namespace namedis
