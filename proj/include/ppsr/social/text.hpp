/*
 * Copyright 2026 The PPSR Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Publication text to TF-IDF vectors.
//
// Tokens are maximal runs of ASCII letters, ASCII digits and non-ASCII bytes
// (so UTF-8 words survive intact), lowercased. Stop words are dropped. A
// keyword's weight for one user is tf * ln(n_docs / df), with tf the raw count
// in that user's publications and df the number of users using it.

#pragma once

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ppsr/error.hpp"

namespace ppsr::social {

using SparseVector = Eigen::SparseVector<double>;

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    auto u = static_cast<unsigned char>(ch);
    bool word = (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') ||
                (u >= '0' && u <= '9') || u >= 0x80;
    if (word) {
      cur.push_back(u >= 'A' && u <= 'Z' ? static_cast<char>(u - 'A' + 'a') : ch);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Bundled English stop-word list.
inline const std::unordered_set<std::string>& stop_words() {
  static const std::unordered_set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "aren", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can",
      "couldn", "d", "did", "didn", "do", "does", "doesn", "doing", "don",
      "down", "during", "each", "few", "for", "from", "further", "had",
      "hadn", "has", "hasn", "have", "haven", "having", "he", "her", "here",
      "hers", "herself", "him", "himself", "his", "how", "i", "if", "in",
      "into", "is", "isn", "it", "its", "itself", "just", "ll", "m", "ma",
      "me", "mightn", "more", "most", "mustn", "my", "myself", "needn", "no",
      "nor", "not", "now", "o", "of", "off", "on", "once", "only", "or",
      "other", "our", "ours", "ourselves", "out", "over", "own", "re", "s",
      "same", "shan", "she", "should", "shouldn", "so", "some", "such", "t",
      "than", "that", "the", "their", "theirs", "them", "themselves", "then",
      "there", "these", "they", "this", "those", "through", "to", "too",
      "under", "until", "up", "ve", "very", "was", "wasn", "we", "were",
      "weren", "what", "when", "where", "which", "while", "who", "whom",
      "why", "will", "with", "won", "wouldn", "y", "you", "your", "yours",
      "yourself", "yourselves"};
  return words;
}

inline std::vector<std::string> remove_stop_words(std::span<const std::string> tokens) {
  const auto& stop = stop_words();
  std::vector<std::string> out;
  for (const std::string& t : tokens) {
    if (!stop.contains(t)) out.push_back(t);
  }
  return out;
}

class Corpus {
 public:
  // Each entry is one user's tokens (already tokenized; stop words are removed
  // here). Keywords used by fewer than min_df users are dropped.
  static Corpus build(std::span<const std::vector<std::string>> user_tokens,
                      std::size_t min_df = 2) {
    Corpus c;
    c.n_docs_ = user_tokens.size();
    std::map<std::string, std::size_t> df;
    for (const auto& doc : user_tokens) {
      std::set<std::string> seen;
      for (const std::string& t : remove_stop_words(doc)) seen.insert(t);
      for (const std::string& t : seen) ++df[t];
    }
    for (const auto& [word, count] : df) {
      if (count >= min_df) {
        c.index_.emplace(word, c.vocabulary_.size());
        c.vocabulary_.push_back(word);
        c.df_.push_back(count);
      }
    }
    return c;
  }

  std::size_t n_docs() const { return n_docs_; }
  std::size_t size() const { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<std::size_t>& document_frequency() const { return df_; }

  // Vocabulary position of word, or -1.
  std::ptrdiff_t find(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }

  double idf(std::size_t j) const {
    return std::log(static_cast<double>(n_docs_) / static_cast<double>(df_[j]));
  }

 private:
  std::size_t n_docs_ = 0;
  std::vector<std::string> vocabulary_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline SparseVector build_publication_vector(std::span<const std::string> tokens,
                                             const Corpus& corpus) {
  if (corpus.size() == 0) throw DataError("corpus vocabulary is empty");
  std::map<std::size_t, double> tf;
  for (const std::string& t : remove_stop_words(tokens)) {
    std::ptrdiff_t j = corpus.find(t);
    if (j >= 0) tf[static_cast<std::size_t>(j)] += 1.0;
  }
  SparseVector v(static_cast<Eigen::Index>(corpus.size()));
  v.reserve(static_cast<Eigen::Index>(tf.size()));
  for (const auto& [j, count] : tf) {
    double w = count * corpus.idf(j);
    if (w != 0.0) v.insert(static_cast<Eigen::Index>(j)) = w;
  }
  return v;
}

}  // namespace ppsr::social
