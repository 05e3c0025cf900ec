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


#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "readlab/random.hpp"
#include "readlab/rsrs.hpp"

using namespace readlab;

namespace {

std::vector<TokenScore> from_wnll(const std::vector<double>& losses, const std::vector<bool>& oov = {}) {
  std::vector<TokenScore> out;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    out.push_back({"t" + std::to_string(i), std::exp(-losses[i]), !oov.empty() && oov[i]});
  }
  return out;
}

std::vector<TokenScore> random_sentence(Rng& rng, std::size_t max_len = 30) {
  std::vector<TokenScore> out;
  const std::size_t n = rng.between(1, max_len);
  for (std::size_t i = 0; i < n; ++i) {
    // A few exact ties exercise the stable ordering.
    const double p = rng.bernoulli(0.15) ? 0.25 : std::max(1e-9, rng.unit());
    out.push_back({"w" + std::to_string(i), p, rng.bernoulli(0.2)});
  }
  return out;
}

}  // namespace

TEST(Wnll, HandValues) {
  EXPECT_DOUBLE_EQ(wnll({"a", 1.0, false}), 0.0);
  EXPECT_NEAR(wnll({"a", std::exp(-2.0), false}), 2.0, 1e-12);
  EXPECT_NEAR(wnll({"a", 0.5, false}), 0.693147, 1e-6);
  EXPECT_THROW(wnll({"a", 0.0, false}), Error);
  EXPECT_THROW(wnll({"a", 1.5, false}), Error);
}

TEST(SentenceRsrs, HandCaseWithoutOov) {
  const double expected = (1.0 * 1.0 + std::sqrt(2.0) * 2.0 + std::sqrt(3.0) * 3.0) / 3.0;
  EXPECT_NEAR(sentence_rsrs(from_wnll({2.0, 1.0, 3.0})), 3.0082, 1e-4);
  EXPECT_NEAR(sentence_rsrs(from_wnll({2.0, 1.0, 3.0})), expected, 1e-12);
}

TEST(SentenceRsrs, HandCaseWithOov) {
  EXPECT_NEAR(sentence_rsrs(from_wnll({2.0, 1.0, 3.0}, {true, false, false})), 3.9510, 1e-4);
}

TEST(SentenceRsrs, SingleWordIsItsLoss) {
  EXPECT_NEAR(sentence_rsrs(from_wnll({1.7})), 1.7, 1e-12);
}

TEST(SentenceRsrs, EmptyIsAnError) {
  EXPECT_THROW(sentence_rsrs(std::vector<TokenScore>{}), Error);
}

TEST(RankSentence, AscendingWithStableTies) {
  const auto ranked = rank_sentence(from_wnll({2.0, 1.0, 2.0, 0.5}));
  ASSERT_EQ(ranked.size(), 4u);
  EXPECT_EQ(ranked[0].token, "t3");
  EXPECT_EQ(ranked[1].token, "t1");
  EXPECT_EQ(ranked[2].token, "t0");
  EXPECT_EQ(ranked[3].token, "t2");
  for (std::size_t r = 0; r < ranked.size(); ++r) EXPECT_EQ(ranked[r].rank, r + 1);
}

TEST(DocumentRsrs, MeanOverSentences) {
  // Two sentences with RSRS 2.0 and 4.0 (single words).
  oracle::TableProvider provider({{"xx", std::exp(-2.0)}, {"yy", std::exp(-4.0)}});
  EXPECT_NEAR(document_rsrs(provider, make_document("d", "xx. yy.")), 3.0, 1e-12);
  const auto one = make_document("d", "xx yy xx.");
  EXPECT_NEAR(document_rsrs(provider, one),
              sentence_rsrs(score_tokens(provider, one.sentences[0].tokens)), 1e-12);
}

TEST(DocumentRsrs, EmptyDocumentIsAnError) {
  oracle::TableProvider provider({});
  try {
    document_rsrs(provider, make_document("d", "?! ..."));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDocument);
  }
}

TEST(DocumentRsrs, UnigramModelMatchesBruteForce) {
  Rng rng(33);
  NGramConfig config;
  config.order = 1;
  const auto model = NGramModel::train(
      std::vector<std::vector<std::string>>{{"a", "b", "c", "a"}, {"b", "d", "a"}, {"e", "a", "f", "g"}}, config);
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f", "g", "h", "i"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    for (int s = 0; s < 3; ++s) {
      for (std::size_t i = 0, n = rng.between(1, 8); i < n; ++i) text += words[rng.below(words.size())] + " ";
      text += ". ";
    }
    const auto doc = make_document("d", text);
    double sum = 0.0;
    for (const auto& sentence : doc.sentences) {
      std::vector<TokenScore> scores;
      for (const auto& t : sentence.tokens) {
        scores.push_back({t, model.probability({}, t), !model.in_vocabulary(t)});
      }
      sum += oracle::rsrs(scores);
    }
    EXPECT_NEAR(document_rsrs(model, doc), sum / 3.0, 1e-9);
  }
}

TEST(ScoreWithModel, RsrsAndPerplexityTogether) {
  oracle::TableProvider provider({{"x", 0.5}, {"y", 0.25}});
  const auto doc = make_document("d", "x y. y y x.");
  const auto lm = score_with_model(provider, doc);
  EXPECT_NEAR(lm.rsrs, document_rsrs(provider, doc), 1e-12);
  EXPECT_NEAR(lm.perplexity, document_perplexity(provider, doc), 1e-12);
}

// Property: sentence RSRS equals the brute-force oracle.
TEST(RsrsProperty, MatchesBruteForce) {
  Rng rng(40);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = random_sentence(rng);
    EXPECT_NEAR(sentence_rsrs(s), oracle::rsrs(s), 1e-9);
  }
}

// Property: ranks are exactly 1..S.
TEST(RsrsProperty, RanksArePermutation) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_sentence(rng);
    const auto ranked = rank_sentence(s);
    std::vector<bool> seen(s.size() + 1, false);
    for (const auto& w : ranked) {
      ASSERT_GE(w.rank, 1u);
      ASSERT_LE(w.rank, s.size());
      EXPECT_FALSE(seen[w.rank]);
      seen[w.rank] = true;
    }
  }
}

// Property: raising one token's loss never lowers RSRS.
TEST(RsrsProperty, MonotonePenalty) {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = random_sentence(rng);
    const double before = sentence_rsrs(s);
    auto& t = s[rng.below(s.size())];
    t.probability *= rng.unit();
    if (t.probability <= 0.0) t.probability = 1e-300;
    EXPECT_GE(sentence_rsrs(s), before - 1e-12);
  }
}

// Same property restricted to in-vocabulary sentences, where the weights
// depend on rank alone.
TEST(RsrsProperty, MonotonePenaltyInVocabulary) {
  Rng rng(45);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = random_sentence(rng);
    for (auto& t : s) t.oov = false;
    const double before = sentence_rsrs(s);
    auto& t = s[rng.below(s.size())];
    t.probability *= rng.unit();
    if (t.probability <= 0.0) t.probability = 1e-300;
    EXPECT_GE(sentence_rsrs(s), before - 1e-12);
  }
}

// Property: marking a token OOV strictly raises RSRS when its loss is > 0.
TEST(RsrsProperty, OovDominance) {
  Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = random_sentence(rng);
    const std::size_t i = rng.below(s.size());
    s[i].oov = false;
    if (s[i].probability >= 1.0) s[i].probability = 0.5;
    const double before = sentence_rsrs(s);
    s[i].oov = true;
    EXPECT_GT(sentence_rsrs(s), before);
  }
}

// Property: appending a token at the current maximum loss does not lower RSRS.
TEST(RsrsProperty, AppendingMaximumLossToken) {
  Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = random_sentence(rng);
    double min_p = 1.0;
    for (const auto& t : s) min_p = std::min(min_p, t.probability);
    const double before = sentence_rsrs(s);
    s.push_back({"extra", min_p, false});
    EXPECT_GE(sentence_rsrs(s), before - 1e-12);
  }
}

TEST(RsrsProperty, AppendingMaximumLossTokenInVocabulary) {
  Rng rng(46);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = random_sentence(rng);
    for (auto& t : s) t.oov = false;
    double min_p = 1.0;
    for (const auto& t : s) min_p = std::min(min_p, t.probability);
    const double before = sentence_rsrs(s);
    s.push_back({"extra", min_p, false});
    EXPECT_GE(sentence_rsrs(s), before - 1e-12);
  }
}

// Property: the n-gram backend and its exported scores give the same RSRS.
TEST(RsrsProperty, ProviderAgnostic) {
  NGramConfig config;
  config.order = 2;
  config.smoothing = Smoothing::kWittenBell;
  const auto model = NGramModel::train(
      std::vector<std::vector<std::string>>{{"the", "cat", "sat"}, {"the", "dog", "ran"}, {"a", "cat", "ran"}},
      config);
  Rng rng(45);
  const std::vector<std::string> words{"the", "cat", "dog", "sat", "ran", "a", "bird", "flew"};
  for (int trial = 0; trial < 30; ++trial) {
    std::string text;
    for (std::size_t s = 0, n = rng.between(1, 5); s < n; ++s) {
      for (std::size_t i = 0, m = rng.between(1, 9); i < m; ++i) text += words[rng.below(words.size())] + " ";
      text += ". ";
    }
    const auto doc = make_document("doc" + std::to_string(trial), text);
    std::istringstream in(export_scores(model, doc).dump());
    const auto precomputed = PrecomputedScores::parse(in);
    EXPECT_NEAR(document_rsrs(model, doc), document_rsrs(precomputed, doc), 1e-9);
  }
}
