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

#include "namedis/embed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "namedis/rng.hpp"

namespace namedis {

const Eigen::VectorXd* VocabEmbeddings::find(const std::string& word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? nullptr : &vectors_[it->second];
}

const Eigen::VectorXd& VocabEmbeddings::at(const std::string& word) const {
  const auto* v = find(word);
  if (!v) throw EmbedError("word not in vocabulary: " + word);
  return *v;
}

void VocabEmbeddings::insert(const std::string& word, Eigen::VectorXd vec) {
  if (vec.size() != dim_) throw EmbedError("vector for '" + word + "' has wrong dimension");
  if (!vec.allFinite()) throw EmbedError("vector for '" + word + "' is not finite");
  if (const auto it = index_.find(word); it != index_.end()) {
    vectors_[it->second] = std::move(vec);
    return;
  }
  index_.emplace(word, words_.size());
  words_.push_back(word);
  vectors_.push_back(std::move(vec));
}

bool VocabEmbeddings::operator==(const VocabEmbeddings& other) const {
  if (dim_ != other.dim_ || words_ != other.words_) return false;
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i] != other.vectors_[i]) return false;
  }
  return true;
}

std::vector<TokenList> embedding_sentences(const std::vector<CandidateSet>& corpus,
                                           bool include_abstracts) {
  std::vector<TokenList> sentences;
  for (const auto& cs : corpus) {
    for (const auto& p : cs.papers) {
      TokenList s = p.title_tokens;
      s.insert(s.end(), p.keyword_tokens.begin(), p.keyword_tokens.end());
      for (const auto& a : p.authors) s.insert(s.end(), a.org_tokens.begin(), a.org_tokens.end());
      s.insert(s.end(), p.venue_tokens.begin(), p.venue_tokens.end());
      if (include_abstracts && p.abstract_tokens) {
        s.insert(s.end(), p.abstract_tokens->begin(), p.abstract_tokens->end());
      }
      if (!s.empty()) sentences.push_back(std::move(s));
    }
  }
  return sentences;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

VocabEmbeddings train_embeddings(const std::vector<TokenList>& sentences, const EmbedConfig& cfg,
                                 EmbedTrace* trace) {
  if (sentences.empty()) throw EmbedError("embedding corpus is empty");
  if (cfg.dim < 1 || cfg.window < 1 || cfg.negatives < 0 || cfg.epochs < 1 || cfg.min_count < 1) {
    throw EmbedError("invalid embedding configuration");
  }

  // Vocabulary ordered by descending count, ties by word, for reproducibility.
  std::map<std::string, std::int64_t> counts;
  for (const auto& s : sentences) {
    for (const auto& w : s) ++counts[w];
  }
  std::vector<std::pair<std::string, std::int64_t>> vocab;
  for (const auto& [w, c] : counts) {
    if (c >= cfg.min_count) vocab.emplace_back(w, c);
  }
  if (vocab.empty()) {
    throw EmbedError("no word reaches min_count=" + std::to_string(cfg.min_count) +
                     "; lower min_count");
  }
  std::stable_sort(vocab.begin(), vocab.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::unordered_map<std::string, int> id;
  for (std::size_t i = 0; i < vocab.size(); ++i) id.emplace(vocab[i].first, static_cast<int>(i));

  std::vector<std::vector<int>> corpus;
  std::int64_t total_tokens = 0;
  for (const auto& s : sentences) {
    std::vector<int> ids;
    for (const auto& w : s) {
      if (const auto it = id.find(w); it != id.end()) ids.push_back(it->second);
    }
    total_tokens += static_cast<std::int64_t>(ids.size());
    if (ids.size() > 1) corpus.push_back(std::move(ids));
  }

  const int v = static_cast<int>(vocab.size());
  const int d = cfg.dim;
  Rng rng(derive_seed(cfg.seed, "sgns"));

  // Unigram^0.75 noise distribution as a cumulative table.
  std::vector<double> cdf(v);
  double acc = 0.0;
  for (int i = 0; i < v; ++i) {
    acc += std::pow(static_cast<double>(vocab[i].second), 0.75);
    cdf[i] = acc;
  }
  for (auto& c : cdf) c /= acc;
  const auto draw_negative = [&]() {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), v - 1));
  };

  Eigen::MatrixXd in(d, v);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, v);
  for (int j = 0; j < v; ++j) {
    for (int i = 0; i < d; ++i) in(i, j) = (rng.uniform() - 0.5) / d;
  }

  const double steps_total = static_cast<double>(cfg.epochs) * std::max<std::int64_t>(total_tokens, 1);
  double step = 0.0;
  Eigen::VectorXd grad_in(d);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss = 0.0;
    std::int64_t terms = 0;
    for (const auto& s : corpus) {
      const int len = static_cast<int>(s.size());
      for (int pos = 0; pos < len; ++pos) {
        const double lr = std::max(cfg.learning_rate * (1.0 - step / steps_total),
                                   cfg.learning_rate * 1e-4);
        step += 1.0;
        const int center = s[pos];
        const int lo = std::max(0, pos - cfg.window);
        const int hi = std::min(len - 1, pos + cfg.window);
        for (int c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const int context = s[c];
          grad_in.setZero();
          for (int k = 0; k <= cfg.negatives; ++k) {
            const int target = k == 0 ? center : draw_negative();
            if (k > 0 && target == center) continue;
            const double label = k == 0 ? 1.0 : 0.0;
            const double score = in.col(context).dot(out.col(target));
            const double p = sigmoid(score);
            loss -= label > 0 ? std::log(std::max(p, 1e-12)) : std::log(std::max(1.0 - p, 1e-12));
            ++terms;
            const double g = lr * (label - p);
            grad_in += g * out.col(target);
            out.col(target) += g * in.col(context);
          }
          in.col(context) += grad_in;
        }
      }
    }
    if (trace) trace->epoch_loss.push_back(terms ? loss / static_cast<double>(terms) : 0.0);
  }

  VocabEmbeddings emb(d);
  for (int j = 0; j < v; ++j) emb.insert(vocab[j].first, in.col(j));
  return emb;
}

VocabEmbeddings train_embeddings(const std::vector<CandidateSet>& corpus, const EmbedConfig& cfg,
                                 EmbedTrace* trace) {
  if (corpus.empty()) throw EmbedError("embedding corpus is empty");
  return train_embeddings(embedding_sentences(corpus, cfg.include_abstracts), cfg, trace);
}

Eigen::VectorXd paper_embedding(const Paper& p, const VocabEmbeddings& emb) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(emb.dim());
  const auto add = [&](const std::string& w) {
    if (const auto* v = emb.find(w)) x += *v;
  };
  for (const auto& w : p.title_tokens) add(w);
  for (const auto& a : p.authors) {
    for (const auto& w : a.org_tokens) add(w);
  }
  for (const auto& w : p.keyword_tokens) add(w);
  return x;
}

void save_embeddings(const VocabEmbeddings& emb, const std::filesystem::path& file) {
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw EmbedError(tmp.string() + ": cannot write");
    out.precision(17);
    for (const auto& w : emb.words()) {
      out << w << '\t';
      const auto& vec = emb.at(w);
      for (Eigen::Index i = 0; i < vec.size(); ++i) out << (i ? " " : "") << vec[i];
      out << '\n';
    }
  }
  std::filesystem::rename(tmp, file);
}

VocabEmbeddings load_embeddings(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw EmbedError(file.string() + ": cannot open");
  std::string line;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw EmbedError(file.string() + ":" + std::to_string(line_no) + ": expected word<TAB>vector");
    }
    std::istringstream values(line.substr(tab + 1));
    std::vector<double> vec;
    double x;
    while (values >> x) vec.push_back(x);
    if (!values.eof() || vec.empty()) {
      throw EmbedError(file.string() + ":" + std::to_string(line_no) + ": bad vector");
    }
    if (!rows.empty() && vec.size() != rows.front().second.size()) {
      throw EmbedError(file.string() + ":" + std::to_string(line_no) + ": dimension mismatch");
    }
    rows.emplace_back(line.substr(0, tab), std::move(vec));
  }
  if (rows.empty()) throw EmbedError(file.string() + ": no vectors");
  VocabEmbeddings emb(static_cast<int>(rows.front().second.size()));
  for (auto& [w, vec] : rows) {
    emb.insert(w, Eigen::Map<Eigen::VectorXd>(vec.data(), static_cast<Eigen::Index>(vec.size())));
  }
  return emb;
}

}  // namespace namedis
