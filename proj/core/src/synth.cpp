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

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "namedis/corpus.hpp"
#include "namedis/rng.hpp"

namespace namedis {
namespace {

constexpr const char* kSyllables[] = {
    "an",   "bo",   "chen", "da",  "fei",  "gang", "hui",  "jun",  "kai",  "lin",  "ming",
    "na",   "ping", "qing", "rui", "shan", "tao",  "wei",  "xin",  "yu",   "zhi",  "li",
    "wang", "zhang", "liu", "yang", "zhao", "huang", "zhou", "wu",  "xu",   "sun",  "hu",
    "zhu",  "gao",  "he",   "guo", "ma",   "luo",  "ka",   "ren",  "to",   "mar",  "el",
    "sa",   "vi",   "dor",  "len", "ko",   "ria",  "ben",  "ta",   "mi",   "ro",   "sen"};
constexpr std::size_t kSyllableCount = sizeof(kSyllables) / sizeof(kSyllables[0]);

constexpr const char* kOrgKinds[] = {"university", "institute", "laboratory", "college",
                                     "academy"};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// Pronounceable pseudo-words built from syllables; `n` syllables each.
std::string make_word(Rng& rng, int n) {
  std::string w;
  for (int i = 0; i < n; ++i) w += kSyllables[rng.below(kSyllableCount)];
  return w;
}

class UniqueWords {
 public:
  explicit UniqueWords(Rng& rng) : rng_(rng) {}

  std::string word(int min_syllables) {
    for (int attempt = 0;; ++attempt) {
      std::string w = make_word(rng_, min_syllables + attempt / 32);
      if (seen_.insert(w).second) return w;
    }
  }

  struct Person {
    std::string given;
    std::string surname;
  };

  // Given name + surname whose sorted-token key is unused so far.
  Person person() {
    for (int attempt = 0;; ++attempt) {
      Person p{capitalize(make_word(rng_, 2 + attempt / 64)), capitalize(make_word(rng_, 1))};
      const auto key = name_key(p.given + " " + p.surname);
      if (key && keys_.insert(*key).second) return p;
    }
  }

  void reserve_key(const std::string& key) { keys_.insert(key); }

 private:
  Rng& rng_;
  std::set<std::string> seen_;
  std::set<std::string> keys_;
};

struct SynthAuthor {
  std::string anchor;
  std::vector<std::string> collaborators;
  std::string org;
  std::vector<std::string> venues;
  std::vector<std::string> topic;
};

std::string make_org(UniqueWords& words, Rng& rng) {
  return capitalize(words.word(2)) + " " + kOrgKinds[rng.below(std::size(kOrgKinds))] + " " +
         capitalize(words.word(2)) + " " + capitalize(words.word(2));
}

constexpr const char* kVenueForms[] = {"International Conference on", "Journal of",
                                       "Transactions on", "Symposium on", "Workshop on",
                                       "Letters on"};

std::string make_venue(UniqueWords& words, Rng& rng) {
  return std::string(kVenueForms[rng.below(std::size(kVenueForms))]) + " " +
         capitalize(words.word(2)) + " " + capitalize(words.word(2)) + " " +
         capitalize(words.word(2));
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

std::string hex_id(std::uint64_t bits) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(12, '0');
  for (int i = 0; i < 12; ++i) s[i] = kHex[(bits >> (4 * i)) & 0xF];
  return s;
}

}  // namespace

void SynthSpec::validate() const {
  if (names < 1 || authors_per_name < 1 || papers_per_author < 1 || coauthor_pool < 1) {
    throw std::invalid_argument("synthetic corpus counts must be >= 1");
  }
  for (double p : {org_noise, venue_noise, coauthor_noise}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise rates must lie in [0, 1]");
  }
}

SynthSpec synth_preset_clean() { return SynthSpec{}; }

SynthSpec synth_preset_noisy() {
  SynthSpec s;
  s.names = 1;
  s.authors_per_name = 5;
  s.papers_per_author = 20;
  s.org_noise = 0.3;
  s.venue_noise = 0.3;
  s.coauthor_noise = 0.3;
  return s;
}

std::vector<CandidateSet> synth_corpus(const SynthSpec& spec) {
  spec.validate();
  std::vector<CandidateSet> sets;
  Rng rng(derive_seed(spec.seed, "synth"));
  UniqueWords words(rng);

  // Attribute words shared by everybody: generic title vocabulary, an org
  // vocabulary for noisy affiliations and a pool of filler venues.
  std::vector<std::string> generic;
  for (int i = 0; i < 30; ++i) generic.push_back(words.word(2));
  std::vector<std::string> org_vocab;
  for (int i = 0; i < 40; ++i) org_vocab.push_back(capitalize(words.word(2)));
  std::vector<std::string> filler_venues;
  for (int i = 0; i < 10; ++i) filler_venues.push_back(make_venue(words, rng));

  for (int s = 0; s < spec.names; ++s) {
    const auto focal = words.person();
    CandidateSet cs;
    cs.display_name = focal.given + " " + focal.surname;
    cs.name = *normalize_name(cs.display_name);
    cs.name_key = *name_key(cs.display_name);
    std::map<std::string, std::string> truth;

    std::vector<SynthAuthor> authors(spec.authors_per_name);
    std::vector<std::string> shared_pool;
    for (int i = 0; i < spec.coauthor_pool * spec.authors_per_name; ++i) {
      const auto p = words.person();
      shared_pool.push_back(p.given + " " + p.surname);
    }
    std::vector<std::string> all_venues = filler_venues;
    for (auto& a : authors) {
      const auto anchor = words.person();
      a.anchor = anchor.given + " " + anchor.surname;
      for (int i = 0; i < spec.coauthor_pool; ++i) {
        const auto p = words.person();
        a.collaborators.push_back(p.given + " " + p.surname);
      }
      a.org = make_org(words, rng);
      a.venues = {make_venue(words, rng), make_venue(words, rng)};
      all_venues.insert(all_venues.end(), a.venues.begin(), a.venues.end());
      for (int i = 0; i < 12; ++i) a.topic.push_back(words.word(3));
    }

    std::uint64_t serial = 0;
    for (int ai = 0; ai < spec.authors_per_name; ++ai) {
      const auto& a = authors[ai];
      const std::string author_id = "s" + std::to_string(s) + "-a" + std::to_string(ai);
      for (int k = 0; k < spec.papers_per_author; ++k) {
        Paper p;
        p.id = hex_id(derive_seed(spec.seed, (static_cast<std::uint64_t>(s) << 32) | serial++));

        TokenList title;
        for (int i = 0; i < 5; ++i) title.push_back(pick(rng, a.topic));
        for (int i = 0; i < 2; ++i) title.push_back(pick(rng, generic));
        rng.shuffle(title.begin(), title.end());
        p.title_raw = join(title);

        for (int i = 0; i < 3; ++i) p.keywords_raw.push_back(pick(rng, a.topic));

        std::string focal_org = a.org;
        if (rng.bernoulli(spec.org_noise)) {
          focal_org = pick(rng, org_vocab) + " " + kOrgKinds[rng.below(std::size(kOrgKinds))] +
                      " " + pick(rng, org_vocab) + " " + pick(rng, org_vocab);
        }
        // Surname-first on roughly half the papers; both orders share a key.
        const std::string focal_raw = rng.bernoulli(0.5) ? focal.given + " " + focal.surname
                                                         : focal.surname + " " + focal.given;

        std::vector<std::string> coauthors{a.anchor};
        const int extra = 1 + static_cast<int>(rng.below(3));
        for (int i = 0; i < extra; ++i) coauthors.push_back(pick(rng, a.collaborators));
        for (auto& c : coauthors) {
          if (rng.bernoulli(spec.coauthor_noise)) c = pick(rng, shared_pool);
        }
        std::sort(coauthors.begin(), coauthors.end());
        coauthors.erase(std::unique(coauthors.begin(), coauthors.end()), coauthors.end());

        std::vector<std::pair<std::string, std::string>> entries{{focal_raw, focal_org}};
        for (const auto& c : coauthors) entries.emplace_back(c, "");
        rng.shuffle(entries.begin(), entries.end());
        for (const auto& [name, org] : entries) {
          AuthorEntry e;
          e.name_raw = name;
          e.name_norm = *normalize_name(name);
          e.name_key = *name_key(name);
          e.org_raw = org;
          e.org_tokens = to_set(tokenize(org));
          p.authors.push_back(std::move(e));
        }

        p.venue_raw = rng.bernoulli(spec.venue_noise) ? pick(rng, all_venues) : pick(rng, a.venues);
        p.venue_tokens = to_set(tokenize_filtered(p.venue_raw));
        p.title_tokens = tokenize_filtered(p.title_raw);
        for (const auto& kw : p.keywords_raw) {
          for (auto& t : tokenize(kw)) p.keyword_tokens.insert(std::move(t));
        }
        p.year = 2000 + static_cast<int>(rng.below(21));

        truth.emplace(p.id, author_id);
        cs.papers.push_back(std::move(p));
      }
    }
    std::sort(cs.papers.begin(), cs.papers.end(),
              [](const Paper& x, const Paper& y) { return x.id < y.id; });
    cs.truth = std::move(truth);
    sets.push_back(std::move(cs));
  }
  std::sort(sets.begin(), sets.end(),
            [](const CandidateSet& a, const CandidateSet& b) { return a.name < b.name; });
  return sets;
}

}  // namespace namedis
