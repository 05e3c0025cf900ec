// Copyright 2026 The readlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "readlab/error.hpp"
#include "readlab/langmodel.hpp"
#include "readlab/textseg.hpp"

namespace readlab {

// Word negative log-likelihood of the realized token: -ln p.
inline double wnll(const TokenScore& score) {
  if (!(score.probability > 0.0 && score.probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability,
                "probability of '" + score.token + "' outside (0,1]: " +
                    std::to_string(score.probability));
  }
  return -std::log(score.probability);
}

struct RankedWord {
  std::string token;
  double wnll = 0.0;
  std::size_t rank = 0;  // 1-based, ascending WNLL
  double weight = 0.0;   // sqrt(rank), doubled for OOV tokens
  bool oov = false;
};

// Tokens sorted by ascending WNLL (ties keep sentence order), with rank
// weights attached. Returned in rank order.
inline std::vector<RankedWord> rank_sentence(std::span<const TokenScore> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptySentence, "cannot rank an empty sentence");
  std::vector<double> losses;
  losses.reserve(scores.size());
  for (const auto& s : scores) losses.push_back(wnll(s));
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
  std::vector<RankedWord> ranked;
  ranked.reserve(scores.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& s = scores[order[r]];
    const double weight = std::sqrt(static_cast<double>(r + 1)) * (s.oov ? 2.0 : 1.0);
    ranked.push_back({s.token, losses[order[r]], r + 1, weight, s.oov});
  }
  return ranked;
}

// Ranked sentence readability score: sum(weight_i * WNLL_i) / S.
inline double sentence_rsrs(std::span<const TokenScore> scores) {
  double total = 0.0;
  for (const auto& word : rank_sentence(scores)) total += word.weight * word.wnll;
  return total / static_cast<double>(scores.size());
}

// Mean sentence RSRS over the document. Sentences without tokens are
// skipped.
inline double document_rsrs(const LikelihoodProvider& provider, const Document& doc) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& sentence : score_document(provider, doc)) {
    if (sentence.empty()) continue;
    sum += sentence_rsrs(sentence);
    ++counted;
  }
  if (counted == 0) {
    throw Error(ErrorCode::kEmptyDocument, "document '" + doc.id + "' has no scorable sentence");
  }
  return sum / static_cast<double>(counted);
}

// RSRS and perplexity from a single scoring pass.
struct LanguageModelScores {
  double rsrs = 0.0;
  double perplexity = 0.0;
};

inline LanguageModelScores score_with_model(const LikelihoodProvider& provider,
                                            const Document& doc) {
  const auto sentences = score_document(provider, doc);
  std::vector<TokenScore> all;
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& sentence : sentences) {
    if (sentence.empty()) continue;
    sum += sentence_rsrs(sentence);
    ++counted;
    all.insert(all.end(), sentence.begin(), sentence.end());
  }
  if (counted == 0) {
    throw Error(ErrorCode::kEmptyDocument, "document '" + doc.id + "' has no scorable sentence");
  }
  return {sum / static_cast<double>(counted), perplexity(all)};
}

}  // namespace readlab
