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

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "readlab/error.hpp"
#include "readlab/textseg.hpp"

namespace readlab {

enum class Measure { kGfi, kFre, kFkgl, kAri, kDcrf, kSmog, kAsl };

inline constexpr std::array<Measure, 7> kTraditionalMeasures = {
    Measure::kGfi, Measure::kFre, Measure::kFkgl, Measure::kAri,
    Measure::kDcrf, Measure::kSmog, Measure::kAsl};

inline std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::kGfi: return "GFI";
    case Measure::kFre: return "FRE";
    case Measure::kFkgl: return "FKGL";
    case Measure::kAri: return "ARI";
    case Measure::kDcrf: return "DCRF";
    case Measure::kSmog: return "SMOG";
    case Measure::kAsl: return "ASL";
  }
  return "?";
}

inline std::optional<Measure> parse_measure(std::string_view name) {
  for (Measure m : kTraditionalMeasures) {
    if (measure_name(m) == name) return m;
  }
  return std::nullopt;
}

enum class Direction { kHigherIsHarder, kHigherIsEasier };

inline std::string_view direction_name(Direction d) {
  return d == Direction::kHigherIsHarder ? "higher-is-harder" : "higher-is-easier";
}

// FRE is the only measure where a larger value means an easier text. This
// also covers the language-model measures (RSRS, PPL), which grow with
// difficulty.
inline Direction direction_of(std::string_view measure) {
  return measure == "FRE" ? Direction::kHigherIsEasier : Direction::kHigherIsHarder;
}

// kPerSentence divides long words by sentences, kStandard by words (the usual
// Gunning fog definition).
enum class GfiVariant { kPerSentence, kStandard };

inline GfiVariant parse_gfi_variant(std::string_view name) {
  if (name == "paper") return GfiVariant::kPerSentence;
  if (name == "standard") return GfiVariant::kStandard;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown GFI variant '" + std::string(name) + "' (expected paper or standard)");
}

namespace detail {

inline void require_sentences(const StatProfile& p, std::string_view measure) {
  if (p.total_sentences == 0) {
    throw Error(ErrorCode::kDegenerateProfile,
                std::string(measure) + " undefined: total_sentences is zero");
  }
}

inline void require_words(const StatProfile& p, std::string_view measure) {
  require_sentences(p, measure);
  if (p.total_words == 0) {
    throw Error(ErrorCode::kDegenerateProfile,
                std::string(measure) + " undefined: total_words is zero");
  }
}

inline double words_per_sentence(const StatProfile& p) {
  return static_cast<double>(p.total_words) / static_cast<double>(p.total_sentences);
}

inline double syllables_per_word(const StatProfile& p) {
  return static_cast<double>(p.total_syllables) / static_cast<double>(p.total_words);
}

}  // namespace detail

inline double gfi(const StatProfile& p, GfiVariant variant = GfiVariant::kPerSentence) {
  detail::require_words(p, "GFI");
  const double denominator = variant == GfiVariant::kPerSentence
                                 ? static_cast<double>(p.total_sentences)
                                 : static_cast<double>(p.total_words);
  return 0.4 * (detail::words_per_sentence(p) +
                100.0 * static_cast<double>(p.long_words) / denominator);
}

inline double fre(const StatProfile& p) {
  detail::require_words(p, "FRE");
  return 206.835 - 1.015 * detail::words_per_sentence(p) -
         84.6 * detail::syllables_per_word(p);
}

inline double fkgl(const StatProfile& p) {
  detail::require_words(p, "FKGL");
  return 0.39 * detail::words_per_sentence(p) + 11.8 * detail::syllables_per_word(p) - 15.59;
}

inline double ari(const StatProfile& p) {
  detail::require_words(p, "ARI");
  return 4.71 * (static_cast<double>(p.total_characters) / static_cast<double>(p.total_words)) +
         0.5 * detail::words_per_sentence(p) - 21.43;
}

inline double dcrf(const StatProfile& p) {
  detail::require_words(p, "DCRF");
  return 0.1579 * (static_cast<double>(p.difficult_words) /
                   static_cast<double>(p.total_words) * 100.0) +
         0.0496 * detail::words_per_sentence(p);
}

inline double smog(const StatProfile& p) {
  detail::require_sentences(p, "SMOG");
  return 1.0430 * std::sqrt(static_cast<double>(p.polysyllables) * 30.0 /
                            static_cast<double>(p.total_sentences)) +
         3.1291;
}

inline double asl(const StatProfile& p) {
  detail::require_sentences(p, "ASL");
  return detail::words_per_sentence(p);
}

inline double evaluate(Measure m, const StatProfile& p, GfiVariant variant = GfiVariant::kPerSentence) {
  switch (m) {
    case Measure::kGfi: return gfi(p, variant);
    case Measure::kFre: return fre(p);
    case Measure::kFkgl: return fkgl(p);
    case Measure::kAri: return ari(p);
    case Measure::kDcrf: return dcrf(p);
    case Measure::kSmog: return smog(p);
    case Measure::kAsl: return asl(p);
  }
  throw Error(ErrorCode::kInternal, "unhandled measure");
}

struct FormulaConfig {
  std::vector<Measure> measures{kTraditionalMeasures.begin(), kTraditionalMeasures.end()};
  GfiVariant gfi_variant = GfiVariant::kPerSentence;
  LangProfile lang = LangProfile::kEnglish;
  const WordList* wordlist = nullptr;
};

// One measure's outcome: either a score or the error that prevented it.
struct MeasureEntry {
  std::string measure;
  std::optional<double> score;
  std::string error;

  friend bool operator==(const MeasureEntry&, const MeasureEntry&) = default;
};

struct MeasureReport {
  std::string doc_id;
  std::vector<MeasureEntry> entries;

  const MeasureEntry* find(std::string_view measure) const {
    for (const auto& e : entries) {
      if (e.measure == measure) return &e;
    }
    return nullptr;
  }

  bool has_errors() const {
    for (const auto& e : entries) {
      if (!e.score) return true;
    }
    return false;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json scores = nlohmann::ordered_json::object();
    nlohmann::ordered_json direction = nlohmann::ordered_json::object();
    for (const auto& e : entries) {
      if (e.score) {
        scores[e.measure] = *e.score;
      } else {
        scores[e.measure] = {{"error", e.error}};
      }
      direction[e.measure] = direction_name(direction_of(e.measure));
    }
    return {{"doc_id", doc_id}, {"scores", scores}, {"direction", direction}};
  }

  static MeasureReport from_json(const nlohmann::ordered_json& j) {
    MeasureReport r;
    try {
      r.doc_id = j.at("doc_id").get<std::string>();
      for (const auto& [name, value] : j.at("scores").items()) {
        MeasureEntry e{name, std::nullopt, {}};
        if (value.is_number()) {
          e.score = value.get<double>();
        } else {
          e.error = value.at("error").get<std::string>();
        }
        r.entries.push_back(std::move(e));
      }
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::kSchemaError, std::string("measure report: ") + ex.what());
    }
    return r;
  }

  friend bool operator==(const MeasureReport&, const MeasureReport&) = default;
};

// Scores every configured measure. A degenerate profile yields an error
// marker for each affected measure instead of a score.
inline MeasureReport score_profile(const std::string& doc_id, const StatProfile& p,
                                   const FormulaConfig& config) {
  MeasureReport report{doc_id, {}};
  for (Measure m : config.measures) {
    MeasureEntry entry{std::string(measure_name(m)), std::nullopt, {}};
    try {
      entry.score = evaluate(m, p, config.gfi_variant);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

inline MeasureReport score_all(const Document& doc, const FormulaConfig& config) {
  return score_profile(doc.id, profile(doc, config.wordlist, config.lang), config);
}

}  // namespace readlab
