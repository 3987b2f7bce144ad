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
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "namedis/corpus.hpp"

namespace namedis {

struct EmbedConfig {
  int dim = 100;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  int min_count = 2;
  double learning_rate = 0.025;
  bool include_abstracts = true;
  std::uint64_t seed = 1;
};

class EmbedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Word-vector table. Vectors are stored as rows of one matrix; `index` maps a
/// word to its row.
class VocabEmbeddings {
 public:
  VocabEmbeddings() = default;
  explicit VocabEmbeddings(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool contains(const std::string& word) const { return index_.contains(word); }

  // Null when the word is out of vocabulary.
  const Eigen::VectorXd* find(const std::string& word) const;
  const Eigen::VectorXd& at(const std::string& word) const;
  const std::vector<std::string>& words() const { return words_; }

  void insert(const std::string& word, Eigen::VectorXd vec);

  bool operator==(const VocabEmbeddings& other) const;

 private:
  int dim_ = 0;
  std::vector<std::string> words_;
  std::vector<Eigen::VectorXd> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Per-epoch mean negative-sampling loss, filled in by train_embeddings.
struct EmbedTrace {
  std::vector<double> epoch_loss;
};

/// One token stream per paper: title, keywords, every author's org, venue and
/// (optionally) abstract.
std::vector<TokenList> embedding_sentences(const std::vector<CandidateSet>& corpus,
                                           bool include_abstracts);

/// Skip-gram with negative sampling over embedding_sentences(corpus).
/// Single-threaded and deterministic for a fixed seed.
VocabEmbeddings train_embeddings(const std::vector<CandidateSet>& corpus, const EmbedConfig& cfg,
                                 EmbedTrace* trace = nullptr);

/// Same trainer over raw sentences.
VocabEmbeddings train_embeddings(const std::vector<TokenList>& sentences, const EmbedConfig& cfg,
                                 EmbedTrace* trace = nullptr);

/// Sum of in-vocabulary vectors over title tokens, every author's org tokens
/// and keyword tokens. An all-OOV paper maps to the zero vector.
Eigen::VectorXd paper_embedding(const Paper& p, const VocabEmbeddings& emb);

/// Text table, one `word<TAB>v1 v2 ... vd` line per word.
void save_embeddings(const VocabEmbeddings& emb, const std::filesystem::path& file);
VocabEmbeddings load_embeddings(const std::filesystem::path& file);

}  // namespace namedis
