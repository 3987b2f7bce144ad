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

#include "namedis/metrics.hpp"

#include <set>

namespace namedis {
namespace {

std::uint64_t pairs(std::uint64_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

PairwiseMetrics pairwise_prf(std::span<const std::string> ids, const ClusterLabels& pred,
                             const std::map<std::string, std::string>& truth) {
  if (ids.size() != pred.size()) throw MetricError("prediction and id list differ in length");
  std::set<std::string> pred_ids(ids.begin(), ids.end());
  if (pred_ids.size() != ids.size()) throw MetricError("duplicate paper id in prediction");

  std::vector<std::string> missing;
  for (const auto& id : pred_ids) {
    if (!truth.contains(id)) missing.push_back(id);
  }
  for (const auto& [id, author] : truth) {
    if (!pred_ids.contains(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    std::string msg = "prediction and truth cover different papers:";
    for (const auto& id : missing) msg += " " + id;
    throw MetricError(msg);
  }
  for (int y : pred.assignment) {
    if (y < 0) throw MetricError("prediction still contains outliers (-1)");
  }

  std::map<int, std::uint64_t> pred_sizes;
  std::map<std::string, std::uint64_t> true_sizes;
  std::map<std::pair<int, std::string>, std::uint64_t> joint;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& author = truth.at(ids[i]);
    ++pred_sizes[pred.assignment[i]];
    ++true_sizes[author];
    ++joint[{pred.assignment[i], author}];
  }

  PairwiseMetrics m;
  for (const auto& [c, k] : pred_sizes) m.pred_pairs += pairs(k);
  for (const auto& [a, k] : true_sizes) m.true_pairs += pairs(k);
  for (const auto& [key, k] : joint) m.hit_pairs += pairs(k);

  if (m.pred_pairs == 0 && m.true_pairs == 0) {
    m.precision = m.recall = m.f1 = 1.0;
    return m;
  }
  m.precision = m.pred_pairs ? static_cast<double>(m.hit_pairs) / static_cast<double>(m.pred_pairs) : 0.0;
  m.recall = m.true_pairs ? static_cast<double>(m.hit_pairs) / static_cast<double>(m.true_pairs) : 1.0;
  m.f1 = harmonic(m.precision, m.recall);
  return m;
}

PairwiseMetrics pairwise_prf(const CandidateSet& cs, const ClusterLabels& pred) {
  if (!cs.truth) throw MetricError("candidate set '" + cs.name + "' has no ground truth");
  std::vector<std::string> ids;
  ids.reserve(cs.papers.size());
  for (const auto& p : cs.papers) ids.push_back(p.id);
  return pairwise_prf(ids, pred, *cs.truth);
}

MacroMetrics macro_average(std::span<const PairwiseMetrics> per_name) {
  if (per_name.empty()) throw MetricError("macro average over zero names");
  MacroMetrics out;
  for (const auto& m : per_name) {
    out.precision += m.precision;
    out.recall += m.recall;
    out.f1 += m.f1;
  }
  const auto n = static_cast<double>(per_name.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  out.f1_of_means = harmonic(out.precision, out.recall);
  out.names = per_name.size();
  return out;
}

}  // namespace namedis
