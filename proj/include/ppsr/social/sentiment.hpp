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

#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <unordered_set>

#include "ppsr/error.hpp"

namespace ppsr::social {

enum class Sentiment { kPositive, kNonPositive };

// Gate for counting a comment or repost as a positive interaction.
class SentimentClassifier {
 public:
  virtual ~SentimentClassifier() = default;
  virtual Sentiment classify(std::span<const std::string> tokens) const = 0;
};

// Positive iff strictly more positive-lexicon tokens than negative ones.
class LexiconClassifier final : public SentimentClassifier {
 public:
  LexiconClassifier(std::unordered_set<std::string> positive,
                    std::unordered_set<std::string> negative)
      : positive_(std::move(positive)), negative_(std::move(negative)) {
    if (positive_.empty() && negative_.empty()) {
      throw ConfigError("sentiment lexicon is empty");
    }
  }

  static LexiconClassifier english() {
    return LexiconClassifier(
        {"good", "great", "love", "like", "excellent", "awesome", "nice",
         "amazing", "best", "wonderful", "enjoy", "enjoyed", "fantastic",
         "happy", "cool", "beautiful", "brilliant", "recommend", "favorite",
         "perfect"},
        {"bad", "terrible", "hate", "awful", "worst", "boring", "poor",
         "horrible", "dislike", "ugly", "sad", "disappointing", "annoying",
         "waste", "wrong", "broken", "meh", "stupid", "never", "angry"});
  }

  Sentiment classify(std::span<const std::string> tokens) const override {
    int pos = 0, neg = 0;
    for (const std::string& t : tokens) {
      if (positive_.contains(t)) ++pos;
      if (negative_.contains(t)) ++neg;
    }
    return pos > neg ? Sentiment::kPositive : Sentiment::kNonPositive;
  }

 private:
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
};

inline Sentiment classify_sentiment(std::span<const std::string> tokens,
                                    const SentimentClassifier& classifier) {
  return classifier.classify(tokens);
}

}  // namespace ppsr::social
