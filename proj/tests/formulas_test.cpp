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

#include "oracles.hpp"
#include "readlab/formulas.hpp"
#include "readlab/random.hpp"

using namespace readlab;

namespace {

StatProfile make(std::size_t w, std::size_t s, std::size_t syll = 0, std::size_t chars = 0,
                 std::size_t long_words = 0, std::size_t poly = 0, std::size_t diff = 0) {
  return {w, s, syll, chars, long_words, poly, diff};
}

StatProfile random_profile(Rng& rng) {
  StatProfile p;
  p.total_sentences = rng.between(1, 200);
  p.total_words = rng.between(1, 5000);
  p.total_syllables = rng.between(p.total_words, 3 * p.total_words);
  p.total_characters = rng.between(p.total_words, 12 * p.total_words);
  p.long_words = rng.between(0, p.total_words);
  p.polysyllables = rng.between(0, p.total_words);
  p.difficult_words = rng.between(0, p.total_words);
  return p;
}

void expect_rel(double actual, double expected, double tol = 1e-9) {
  EXPECT_LE(std::abs(actual - expected), tol * std::max(1.0, std::abs(expected)))
      << actual << " vs " << expected;
}

}  // namespace

TEST(Gfi, HandValues) {
  EXPECT_NEAR(gfi(make(100, 10, 0, 0, 0)), 4.0, 1e-12);
  EXPECT_NEAR(gfi(make(100, 10, 0, 0, 5)), 24.0, 1e-12);
  EXPECT_NEAR(gfi(make(10, 10, 0, 0, 0)), 0.4, 1e-12);
}

TEST(Gfi, StandardVariantDividesByWords) {
  EXPECT_NEAR(gfi(make(100, 10, 0, 0, 5), GfiVariant::kStandard), 0.4 * (10 + 5), 1e-12);
}

TEST(Fre, HandValues) {
  EXPECT_NEAR(fre(make(100, 10, 150)), 69.785, 1e-9);
  EXPECT_NEAR(fre(make(10, 10, 10)), 121.22, 1e-9);
}

TEST(Fkgl, HandValues) {
  EXPECT_NEAR(fkgl(make(100, 10, 150)), 6.01, 1e-9);
  EXPECT_NEAR(fkgl(make(10, 10, 10)), -3.4, 1e-9);
  EXPECT_NEAR(fkgl(make(100, 10, 100)), 0.11, 1e-9);
}

TEST(Ari, HandValues) {
  EXPECT_NEAR(ari(make(100, 10, 0, 450)), 4.765, 1e-9);
  EXPECT_NEAR(ari(make(1, 1, 0, 1)), -16.22, 1e-9);
  EXPECT_NEAR(ari(make(100, 10, 0, 600)), 11.83, 1e-9);
}

TEST(Dcrf, HandValues) {
  EXPECT_NEAR(dcrf(make(100, 10, 0, 0, 0, 0, 20)), 3.654, 1e-9);
  EXPECT_NEAR(dcrf(make(100, 10, 0, 0, 0, 0, 0)), 0.496, 1e-9);
  EXPECT_NEAR(dcrf(make(100, 10, 0, 0, 0, 0, 100)), 16.286, 1e-9);
}

TEST(Smog, HandValues) {
  EXPECT_NEAR(smog(make(0, 10, 0, 0, 0, 0)), 3.1291, 1e-12);
  EXPECT_NEAR(smog(make(0, 30, 0, 0, 0, 15)), 7.1686, 1e-4);
  EXPECT_NEAR(smog(make(0, 30, 0, 0, 0, 30)), 8.8419, 1e-4);
}

TEST(Asl, HandValues) {
  EXPECT_DOUBLE_EQ(asl(make(100, 10)), 10.0);
  EXPECT_DOUBLE_EQ(asl(make(9, 2)), 4.5);
  EXPECT_DOUBLE_EQ(asl(make(0, 1)), 0.0);
}

TEST(Degenerate, ZeroSentencesFailsEveryMeasure) {
  for (Measure m : kTraditionalMeasures) {
    try {
      evaluate(m, make(10, 0, 10, 10));
      FAIL() << measure_name(m);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDegenerateProfile);
      EXPECT_NE(std::string(e.what()).find("total_sentences"), std::string::npos);
    }
  }
}

TEST(Degenerate, ZeroWordsFailsWordRatios) {
  const auto p = make(0, 3);
  for (Measure m : {Measure::kGfi, Measure::kFre, Measure::kFkgl, Measure::kAri, Measure::kDcrf}) {
    EXPECT_THROW(evaluate(m, p), Error) << measure_name(m);
  }
  EXPECT_NO_THROW(evaluate(Measure::kSmog, p));
  EXPECT_NO_THROW(evaluate(Measure::kAsl, p));
}

TEST(Report, SevenEntriesForValidDocument) {
  const auto report = score_all(make_document("d", "The cat sat on the mat."), FormulaConfig{});
  ASSERT_EQ(report.entries.size(), 7u);
  EXPECT_FALSE(report.has_errors());
}

TEST(Report, ZeroSentenceDocumentHasSevenErrorMarkers) {
  const auto report = score_all(make_document("d", ""), FormulaConfig{});
  ASSERT_EQ(report.entries.size(), 7u);
  for (const auto& e : report.entries) {
    EXPECT_FALSE(e.score.has_value());
    EXPECT_FALSE(e.error.empty());
  }
}

TEST(Report, JsonRoundTripAndDirections) {
  const auto report = score_all(make_document("d1", "A short one. Another sentence here."), FormulaConfig{});
  const auto j = report.to_json();
  EXPECT_EQ(j["direction"]["FRE"], "higher-is-easier");
  EXPECT_EQ(j["direction"]["GFI"], "higher-is-harder");
  EXPECT_EQ(MeasureReport::from_json(j), report);
  const auto failed = score_all(make_document("d2", ""), FormulaConfig{});
  EXPECT_TRUE(failed.to_json()["scores"]["GFI"].contains("error"));
  EXPECT_EQ(MeasureReport::from_json(failed.to_json()), failed);
}

TEST(Names, ParseAndPrint) {
  for (Measure m : kTraditionalMeasures) EXPECT_EQ(parse_measure(measure_name(m)), m);
  EXPECT_FALSE(parse_measure("XYZ").has_value());
  EXPECT_THROW(parse_gfi_variant("other"), Error);
}

// Property: every formula equals the straight-line oracle on random profiles.
TEST(FormulaProperty, MatchesOracleOnRandomProfiles) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_profile(rng);
    const double w = p.total_words, s = p.total_sentences;
    expect_rel(gfi(p), oracle::gfi_paper(w, s, p.long_words));
    expect_rel(gfi(p, GfiVariant::kStandard), oracle::gfi_standard(w, s, p.long_words));
    expect_rel(fre(p), oracle::fre(w, s, p.total_syllables));
    expect_rel(fkgl(p), oracle::fkgl(w, s, p.total_syllables));
    expect_rel(ari(p), oracle::ari(p.total_characters, w, s));
    expect_rel(dcrf(p), oracle::dcrf(p.difficult_words, w, s));
    expect_rel(smog(p), oracle::smog(p.polysyllables, s));
    expect_rel(asl(p), oracle::asl(w, s));
  }
}

// Property: FRE falls and FKGL rises as syllables per word grow.
TEST(FormulaProperty, SyllableMonotonicity) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_profile(rng);
    auto q = p;
    q.total_syllables += rng.between(1, 50);
    EXPECT_LT(fre(q), fre(p));
    EXPECT_GT(fkgl(q), fkgl(p));
  }
}

// Property: an empty word list makes DCRF count long words as difficult.
TEST(FormulaProperty, DcrfFallbackEqualsLongWords) {
  const WordList empty;
  const auto doc = make_document("d", "Considerable improvements happened yesterday. It rained all afternoon.");
  auto p = profile(doc, &empty, LangProfile::kEnglish);
  auto q = p;
  q.difficult_words = q.long_words;
  EXPECT_DOUBLE_EQ(dcrf(p), dcrf(q));
}

// Property: doubling every count leaves every measure unchanged.
TEST(FormulaProperty, DuplicationInvariance) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_profile(rng);
    StatProfile d{2 * p.total_words, 2 * p.total_sentences, 2 * p.total_syllables, 2 * p.total_characters,
                  2 * p.long_words, 2 * p.polysyllables, 2 * p.difficult_words};
    for (Measure m : kTraditionalMeasures) expect_rel(evaluate(m, d), evaluate(m, p), 1e-12);
  }
  // The same holds when the document text itself is repeated.
  const std::string text = "Several remarkable outcomes appeared. Nobody expected them.";
  const auto once = profile(make_document("a", text), nullptr, LangProfile::kEnglish);
  const auto twice = profile(make_document("b", text + " " + text), nullptr, LangProfile::kEnglish);
  for (Measure m : kTraditionalMeasures) expect_rel(evaluate(m, twice), evaluate(m, once), 1e-12);
}
