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
#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "readlab/error.hpp"

namespace readlab {

namespace utf8 {

struct Decoded {
  char32_t cp;
  std::size_t length;
};

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the code point starting at `pos`. Malformed bytes decode as
// U+FFFD with length 1 so scanning always makes progress.
inline Decoded decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {kReplacement, 1};
  }
  if (pos + len > s.size()) return {kReplacement, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {kReplacement, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::vector<char32_t> code_points(std::string_view s) {
  std::vector<char32_t> cps;
  for (std::size_t pos = 0; pos < s.size();) {
    const auto d = decode(s, pos);
    cps.push_back(d.cp);
    pos += d.length;
  }
  return cps;
}

}  // namespace utf8

namespace chars {

inline bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200B) ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

inline bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

// Letters and digits. Outside ASCII, everything that is not a known
// punctuation/symbol/space block is treated as a letter; this covers the
// Latin, Cyrillic and Greek scripts without a Unicode database.
inline bool is_word(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || is_digit(cp);
  }
  if (cp <= 0x00BF || cp == 0x00D7 || cp == 0x00F7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp == utf8::kReplacement) return false;
  return true;
}

// Apostrophes and hyphens that may join two word characters.
inline bool is_joiner(char32_t cp) {
  return cp == '\'' || cp == '-' || cp == 0x2019 || cp == 0x2010 || cp == 0x2011;
}

// Latin-1 and Latin Extended-A case folding, enough for English and
// Slovenian (č, š, ž).
inline char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
  if ((cp >= 0x0100 && cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x0178) return 0x00FF;
  return cp;
}

}  // namespace chars

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) {
    const auto d = utf8::decode(s, pos);
    if (d.cp == utf8::kReplacement) {
      out.append(s.substr(pos, d.length));
    } else {
      utf8::append(out, chars::to_lower(d.cp));
    }
    pos += d.length;
  }
  return out;
}

enum class LangProfile { kEnglish, kSlovenian };

inline LangProfile parse_lang(std::string_view name) {
  if (name == "en") return LangProfile::kEnglish;
  if (name == "sl") return LangProfile::kSlovenian;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown language profile '" + std::string(name) + "' (expected en or sl)");
}

inline std::string_view lang_name(LangProfile lang) {
  return lang == LangProfile::kEnglish ? "en" : "sl";
}

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<Sentence> sentences;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
  }

  friend bool operator==(const Document&, const Document&) = default;
};

struct StatProfile {
  std::size_t total_words = 0;
  std::size_t total_sentences = 0;
  std::size_t total_syllables = 0;
  std::size_t total_characters = 0;
  std::size_t long_words = 0;
  std::size_t polysyllables = 0;
  std::size_t difficult_words = 0;

  friend bool operator==(const StatProfile&, const StatProfile&) = default;
};

// Lowercase word list for the Dale-Chall difficult-word test. An empty list
// means "not configured": difficult words then fall back to long words.
class WordList {
 public:
  WordList() = default;

  static WordList from_words(const std::vector<std::string>& words) {
    WordList list;
    for (const auto& w : words) {
      if (!w.empty()) list.words_.insert(to_lower(w));
    }
    return list;
  }

  // One word per line, '#' starts a comment line.
  static WordList load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kMissingFile, "cannot open word list " + path.string());
    WordList list;
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      list.words_.insert(to_lower(std::string_view(line).substr(first, last - first + 1)));
    }
    return list;
  }

  bool empty() const { return words_.empty(); }
  std::size_t size() const { return words_.size(); }
  bool contains_lowered(const std::string& lowered) const { return words_.count(lowered) > 0; }

 private:
  std::unordered_set<std::string> words_;
};

// Version of the abbreviation list below. Bump when the list changes, since
// sentence boundaries (and every downstream count) depend on it.
inline constexpr int kAbbreviationListVersion = 1;

inline const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> kList = {
      // English titles and common shortenings
      "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt", "vs", "etc",
      "e.g", "i.e", "cf", "inc", "ltd", "corp", "dept", "approx", "fig",
      "gen", "gov", "lt", "col", "capt", "sgt", "rev", "u.s", "u.k", "a.m",
      "p.m", "jan", "feb", "apr", "jun", "jul", "aug", "sep", "sept", "oct",
      "nov", "dec",
      // Slovenian
      "npr", "itd", "ipd", "oz", "tj", "mag", "gl", "str", "sv", "gosp", "ga",
  };
  return kList;
}

namespace detail {

inline bool is_terminal(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == 0x2026;
}

inline bool is_closer(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == '}' ||
         cp == 0x201D || cp == 0x2019 || cp == 0x00BB;
}

inline std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end) {
    const auto d = utf8::decode(s, begin);
    if (!chars::is_space(d.cp)) break;
    begin += d.length;
  }
  while (end > begin) {
    // step back to the start of the last code point
    std::size_t start = end - 1;
    while (start > begin && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
    if (!chars::is_space(utf8::decode(s, start).cp)) break;
    end = start;
  }
  return s.substr(begin, end - begin);
}

// True when the single '.' at byte `dot` ends an abbreviation or an initial.
inline bool ends_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0) {
    std::size_t prev = start - 1;
    while (prev > 0 && (static_cast<unsigned char>(text[prev]) & 0xC0) == 0x80) --prev;
    if (chars::is_space(utf8::decode(text, prev).cp)) break;
    start = prev;
  }
  std::string_view word = text.substr(start, dot - start);
  // strip opening punctuation such as quotes and brackets
  while (!word.empty()) {
    const auto d = utf8::decode(word, 0);
    if (chars::is_word(d.cp)) break;
    word.remove_prefix(d.length);
  }
  if (word.empty()) return false;
  const auto cps = utf8::code_points(word);
  if (cps.size() == 1 && chars::is_word(cps[0]) && !chars::is_digit(cps[0])) return true;
  return abbreviations().count(to_lower(word)) > 0;
}

}  // namespace detail

// Rule-based sentence splitter. A boundary follows a run of terminal
// punctuation (. ! ? …), optionally trailed by closing quotes/brackets, that
// is followed by whitespace or end of text. A lone '.' ending an
// abbreviation or single-letter initial is not a boundary; decimal numbers
// never split since their '.' is not followed by whitespace.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t sentence_start = 0;
  std::size_t pos = 0;
  auto emit = [&](std::size_t end) {
    const auto piece = detail::trim(text.substr(sentence_start, end - sentence_start));
    if (!piece.empty()) out.emplace_back(piece);
    sentence_start = end;
  };
  while (pos < text.size()) {
    const auto d = utf8::decode(text, pos);
    if (!detail::is_terminal(d.cp)) {
      pos += d.length;
      continue;
    }
    const std::size_t run_start = pos;
    std::size_t run_end = pos;
    std::size_t terminal_count = 0;
    while (run_end < text.size()) {
      const auto r = utf8::decode(text, run_end);
      if (detail::is_terminal(r.cp)) {
        ++terminal_count;
      } else if (!detail::is_closer(r.cp)) {
        break;
      }
      run_end += r.length;
    }
    const bool at_space =
        run_end == text.size() || chars::is_space(utf8::decode(text, run_end).cp);
    bool boundary = at_space;
    if (boundary && terminal_count == 1 && text[run_start] == '.' &&
        detail::ends_abbreviation(text, run_start)) {
      boundary = false;
    }
    if (boundary) emit(run_end);
    pos = run_end;
  }
  emit(text.size());
  return out;
}

// Maximal runs of letters/digits. Apostrophes and hyphens are kept when they
// join two word characters; ',' and '.' are kept between two digits.
inline std::vector<std::string> tokenize_words(std::string_view sentence) {
  std::vector<std::string> tokens;
  const auto cps = utf8::code_points(sentence);
  std::vector<std::size_t> offsets;
  offsets.reserve(cps.size() + 1);
  for (std::size_t pos = 0; pos < sentence.size();) {
    offsets.push_back(pos);
    pos += utf8::decode(sentence, pos).length;
  }
  offsets.push_back(sentence.size());

  std::size_t i = 0;
  while (i < cps.size()) {
    if (!chars::is_word(cps[i])) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    ++i;
    while (i < cps.size()) {
      if (chars::is_word(cps[i])) {
        ++i;
        continue;
      }
      const bool has_next = i + 1 < cps.size() && chars::is_word(cps[i + 1]);
      if (has_next && chars::is_joiner(cps[i])) {
        ++i;
        continue;
      }
      if ((cps[i] == ',' || cps[i] == '.') && chars::is_digit(cps[i - 1]) &&
          i + 1 < cps.size() && chars::is_digit(cps[i + 1])) {
        ++i;
        continue;
      }
      break;
    }
    tokens.emplace_back(sentence.substr(offsets[begin], offsets[i] - offsets[begin]));
  }
  return tokens;
}

// Number of letters and digits in a token (separators excluded).
inline std::size_t alnum_length(std::string_view token) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < token.size();) {
    const auto d = utf8::decode(token, pos);
    if (chars::is_word(d.cp)) ++n;
    pos += d.length;
  }
  return n;
}

namespace detail {

inline bool is_vowel(char32_t lowered, LangProfile lang) {
  switch (lowered) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
    case 0xE0: case 0xE1: case 0xE2: case 0xE4:  // à á â ä
    case 0xE8: case 0xE9: case 0xEA: case 0xEB:  // è é ê ë
    case 0xEC: case 0xED: case 0xEE: case 0xEF:  // ì í î ï
    case 0xF2: case 0xF3: case 0xF4: case 0xF6:  // ò ó ô ö
    case 0xF9: case 0xFA: case 0xFB: case 0xFC:  // ù ú û ü
      return true;
    case 'y':
      return lang == LangProfile::kEnglish;
    default:
      return false;
  }
}

}  // namespace detail

// Vowel-group syllable heuristic, never less than 1.
//   en: groups of [aeiouy]; a final 'e' after a consonant is silent unless
//       the word ends in consonant + "le" (ta-ble), and only when another
//       group remains.
//   sl: groups of [aeiou].
inline std::size_t count_syllables(std::string_view word, LangProfile lang) {
  std::vector<char32_t> letters;
  for (char32_t cp : utf8::code_points(word)) {
    if (chars::is_word(cp) && !chars::is_digit(cp)) letters.push_back(chars::to_lower(cp));
  }
  std::size_t groups = 0;
  bool in_group = false;
  for (char32_t cp : letters) {
    const bool vowel = detail::is_vowel(cp, lang);
    if (vowel && !in_group) ++groups;
    in_group = vowel;
  }
  if (lang == LangProfile::kEnglish && groups > 1 && letters.size() >= 2 &&
      letters.back() == 'e' && !detail::is_vowel(letters[letters.size() - 2], lang)) {
    const std::size_t n = letters.size();
    const bool consonant_le = n >= 3 && letters[n - 2] == 'l' &&
                              !detail::is_vowel(letters[n - 3], lang);
    if (!consonant_le) --groups;
  }
  return std::max<std::size_t>(groups, 1);
}

// Fills doc.sentences from doc.raw_text. Punctuation-only sentences are kept
// with an empty token list.
inline void segment(Document& doc) {
  doc.sentences.clear();
  for (auto& text : split_sentences(doc.raw_text)) {
    Sentence s;
    s.tokens = tokenize_words(text);
    s.text = std::move(text);
    doc.sentences.push_back(std::move(s));
  }
}

inline Document make_document(std::string id, std::string raw_text) {
  Document doc{std::move(id), std::move(raw_text), {}};
  segment(doc);
  return doc;
}

inline constexpr std::size_t kLongWordThreshold = 7;

// Surface counts over every token of a segmented document. With no word list
// (or an empty one) difficult_words equals long_words.
inline StatProfile profile(const Document& doc, const WordList* wordlist, LangProfile lang) {
  StatProfile p;
  const bool use_list = wordlist != nullptr && !wordlist->empty();
  p.total_sentences = doc.sentences.size();
  for (const auto& sentence : doc.sentences) {
    for (const auto& token : sentence.tokens) {
      const std::size_t length = alnum_length(token);
      const std::size_t syllables = count_syllables(token, lang);
      const bool is_long = length > kLongWordThreshold;
      ++p.total_words;
      p.total_syllables += syllables;
      p.total_characters += length;
      if (is_long) ++p.long_words;
      if (syllables >= 3) ++p.polysyllables;
      if (use_list) {
        if (!wordlist->contains_lowered(to_lower(token))) ++p.difficult_words;
      } else if (is_long) {
        ++p.difficult_words;
      }
    }
  }
  return p;
}

}  // namespace readlab
