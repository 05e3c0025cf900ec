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

#include <string>
#include <vector>

#include "readlab/corpus.hpp"
#include "readlab/random.hpp"
#include "readlab/textseg.hpp"

using namespace readlab;
using Strings = std::vector<std::string>;

namespace {

std::string random_text(Rng& rng) {
  static const Strings pieces = {"The", "cat", "Dr.", "Smith", "left", "3,000", "state-of-the-art",
                                 "naïve", "šola", "é", "table", "make", "it's", "ran", "U.S.",
                                 "television", "e.g.", "—", "(", ")", "\"", "...", "?", "!", ".",
                                 ",", ";", "a", "Mr.", "x"};
  std::string text;
  const std::size_t n = rng.between(0, 40);
  for (std::size_t i = 0; i < n; ++i) {
    text += pieces[rng.below(pieces.size())];
    text += rng.bernoulli(0.8) ? " " : "";
  }
  return text;
}

}  // namespace

TEST(SplitSentences, UnambiguousTerminals) {
  EXPECT_EQ(split_sentences("It rained. We left."), (Strings{"It rained.", "We left."}));
}

TEST(SplitSentences, EmptyInput) { EXPECT_TRUE(split_sentences("").empty()); }

TEST(SplitSentences, AbbreviationDoesNotBreak) {
  EXPECT_EQ(split_sentences("Dr. Smith left. He ran."), (Strings{"Dr. Smith left.", "He ran."}));
}

TEST(SplitSentences, WhitespaceOnly) { EXPECT_TRUE(split_sentences("  \n\t ").empty()); }

TEST(SplitSentences, TrailingTextWithoutTerminal) {
  EXPECT_EQ(split_sentences("One. two"), (Strings{"One.", "two"}));
}

TEST(SplitSentences, TerminalRunsAndClosers) {
  EXPECT_EQ(split_sentences("Really?! Yes. \"Quoted.\" Done"),
            (Strings{"Really?!", "Yes.", "\"Quoted.\"", "Done"}));
}

TEST(SplitSentences, DecimalNumberIsNotABoundary) {
  EXPECT_EQ(split_sentences("Pi is 3.14 roughly. Yes."), (Strings{"Pi is 3.14 roughly.", "Yes."}));
}

TEST(SplitSentences, SingleLetterInitial) {
  EXPECT_EQ(split_sentences("J. Smith came. Then left."), (Strings{"J. Smith came.", "Then left."}));
}

TEST(SplitSentences, SlovenianAbbreviation) {
  EXPECT_EQ(split_sentences("Npr. tako. Drugi stavek."), (Strings{"Npr. tako.", "Drugi stavek."}));
}

TEST(Tokenize, Simple) { EXPECT_EQ(tokenize_words("We left."), (Strings{"We", "left"})); }

TEST(Tokenize, HyphenatedCompoundIsOneToken) {
  EXPECT_EQ(tokenize_words("state-of-the-art"), (Strings{"state-of-the-art"}));
}

TEST(Tokenize, DigitGroupsStayTogether) {
  EXPECT_EQ(tokenize_words("3,000 words"), (Strings{"3,000", "words"}));
  EXPECT_EQ(tokenize_words("3.5, then"), (Strings{"3.5", "then"}));
}

TEST(Tokenize, ApostrophesAndEdgeHyphens) {
  EXPECT_EQ(tokenize_words("it's -well- done"), (Strings{"it's", "well", "done"}));
}

TEST(Tokenize, NonAsciiLetters) {
  EXPECT_EQ(tokenize_words("Šola je lepa, naïve café."), (Strings{"Šola", "je", "lepa", "naïve", "café"}));
}

TEST(Tokenize, PunctuationOnly) { EXPECT_TRUE(tokenize_words("... — !").empty()); }

TEST(Syllables, EnglishExamples) {
  EXPECT_EQ(count_syllables("cat", LangProfile::kEnglish), 1u);
  EXPECT_EQ(count_syllables("television", LangProfile::kEnglish), 4u);
  EXPECT_EQ(count_syllables("make", LangProfile::kEnglish), 1u);
  EXPECT_EQ(count_syllables("table", LangProfile::kEnglish), 2u);
  EXPECT_EQ(count_syllables("the", LangProfile::kEnglish), 1u);
  EXPECT_EQ(count_syllables("Extraordinary", LangProfile::kEnglish), 5u);
}

TEST(Syllables, EveryWordHasAtLeastOne) {
  EXPECT_EQ(count_syllables("rhythm", LangProfile::kEnglish), 1u);
  EXPECT_EQ(count_syllables("3,000", LangProfile::kEnglish), 1u);
  EXPECT_EQ(count_syllables("krst", LangProfile::kSlovenian), 1u);
}

TEST(Syllables, Slovenian) {
  EXPECT_EQ(count_syllables("knjiga", LangProfile::kSlovenian), 2u);
  EXPECT_EQ(count_syllables("hiša", LangProfile::kSlovenian), 2u);
  EXPECT_EQ(count_syllables("učiteljica", LangProfile::kSlovenian), 5u);
  // No silent-e rule in Slovenian.
  EXPECT_EQ(count_syllables("vse", LangProfile::kSlovenian), 1u);
  EXPECT_EQ(count_syllables("rane", LangProfile::kSlovenian), 2u);
}

TEST(Lowercase, LatinExtended) {
  EXPECT_EQ(to_lower("ŠČŽ Ä Hello"), "ščž ä hello");
}

TEST(Profile, HandCounted) {
  const auto doc = make_document("d", "The cat sat.");
  const auto p = profile(doc, nullptr, LangProfile::kEnglish);
  EXPECT_EQ(p.total_words, 3u);
  EXPECT_EQ(p.total_sentences, 1u);
  EXPECT_EQ(p.total_syllables, 3u);
  EXPECT_EQ(p.total_characters, 9u);
  EXPECT_EQ(p.long_words, 0u);
  EXPECT_EQ(p.polysyllables, 0u);
}

TEST(Profile, EmptyDocumentIsAllZero) {
  EXPECT_EQ(profile(make_document("d", ""), nullptr, LangProfile::kEnglish), StatProfile{});
}

TEST(Profile, DifficultFallsBackToLongWords) {
  const WordList empty;
  const auto p = profile(make_document("d", "Extraordinary."), &empty, LangProfile::kEnglish);
  EXPECT_EQ(p.difficult_words, 1u);
  EXPECT_EQ(p.long_words, 1u);
}

TEST(Profile, WordListDecidesDifficulty) {
  const auto list = WordList::from_words({"the", "cat"});
  const auto p = profile(make_document("d", "The cat sat."), &list, LangProfile::kEnglish);
  EXPECT_EQ(p.difficult_words, 1u);  // "sat"
}

TEST(Profile, LongWordThresholdIsStrict) {
  // "letters" has exactly 7 characters, "lettered" 8.
  const auto p = profile(make_document("d", "letters lettered."), nullptr, LangProfile::kEnglish);
  EXPECT_EQ(p.long_words, 1u);
}

TEST(WordListFile, CommentsAndCase) {
  const auto dir = std::filesystem::temp_directory_path() / "readlab_wordlist_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "list.txt";
  {
    std::ofstream out(path);
    out << "# header\nCat\n  dog  \n\n";
  }
  const auto list = WordList::load(path);
  EXPECT_EQ(list.size(), 2u);
  EXPECT_TRUE(list.contains_lowered("cat"));
  EXPECT_TRUE(list.contains_lowered("dog"));
  EXPECT_THROW(WordList::load(dir / "missing.txt"), Error);
}

// Property: rebuilding a document from its sentence texts gives the same
// profile.
TEST(ProfileProperty, ReserializationIsIdempotent) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto doc = make_document("d", random_text(rng));
    std::string rebuilt;
    for (const auto& s : doc.sentences) rebuilt += s.text + " ";
    const auto again = make_document("d", rebuilt);
    EXPECT_EQ(profile(doc, nullptr, LangProfile::kEnglish), profile(again, nullptr, LangProfile::kEnglish))
        << "text: " << doc.raw_text;
  }
}

// Property: appending a sentence never lowers any count.
TEST(ProfileProperty, AppendingASentenceIsMonotone) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    auto doc = make_document("d", random_text(rng));
    const auto before = profile(doc, nullptr, LangProfile::kEnglish);
    const auto extra = make_document("e", random_text(rng) + ".");
    for (const auto& s : extra.sentences) doc.sentences.push_back(s);
    const auto after = profile(doc, nullptr, LangProfile::kEnglish);
    EXPECT_GE(after.total_words, before.total_words);
    EXPECT_GE(after.total_sentences, before.total_sentences);
    EXPECT_GE(after.total_syllables, before.total_syllables);
    EXPECT_GE(after.total_characters, before.total_characters);
    EXPECT_GE(after.long_words, before.long_words);
    EXPECT_GE(after.polysyllables, before.polysyllables);
    EXPECT_GE(after.difficult_words, before.difficult_words);
  }
}

// Property: tokens never cover more bytes than the text they came from.
TEST(ProfileProperty, TokenCoverage) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const auto text = random_text(rng);
    std::size_t covered = 0;
    for (const auto& t : tokenize_words(text)) covered += t.size();
    EXPECT_LE(covered, text.size());
    for (const auto& s : split_sentences(text)) {
      std::size_t in_sentence = 0;
      for (const auto& t : tokenize_words(s)) in_sentence += t.size();
      EXPECT_LE(in_sentence, s.size());
    }
  }
}

TEST(ProfileProperty, Deterministic) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto text = random_text(rng);
    EXPECT_EQ(make_document("a", text), make_document("a", text));
  }
}
