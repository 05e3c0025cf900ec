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
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "readlab/error.hpp"
#include "readlab/textseg.hpp"

namespace readlab {

// Probability the model assigned to the realized token, plus whether the
// token fell outside the model vocabulary.
struct TokenScore {
  std::string token;
  double probability = 1.0;
  bool oov = false;

  friend bool operator==(const TokenScore&, const TokenScore&) = default;
};

// Anything that can assign a probability to every token of a sentence: the
// n-gram backend, a file of scores exported from an external model, ...
// Implementations must be safe to query concurrently.
class LikelihoodProvider {
 public:
  virtual ~LikelihoodProvider() = default;

  // `sentence_index` is the position of the sentence within its document's
  // sentence list; context-free backends ignore it along with `doc_id`.
  virtual std::vector<TokenScore> score_sentence(std::string_view doc_id,
                                                 std::size_t sentence_index,
                                                 std::span<const std::string> tokens) const = 0;
};

inline std::vector<TokenScore> score_tokens(const LikelihoodProvider& provider,
                                            std::span<const std::string> sentence,
                                            std::string_view doc_id = {},
                                            std::size_t sentence_index = 0) {
  if (sentence.empty()) throw Error(ErrorCode::kEmptySentence, "cannot score an empty sentence");
  auto scores = provider.score_sentence(doc_id, sentence_index, sentence);
  if (scores.size() != sentence.size()) {
    throw Error(ErrorCode::kProviderFailure,
                "provider returned " + std::to_string(scores.size()) + " scores for " +
                    std::to_string(sentence.size()) + " tokens");
  }
  for (const auto& s : scores) {
    if (!(s.probability > 0.0 && s.probability <= 1.0)) {
      throw Error(ErrorCode::kProviderFailure,
                  "provider returned probability outside (0,1] for '" + s.token + "'");
    }
  }
  return scores;
}

// Scores of every sentence of a document, aligned with doc.sentences. Empty
// sentences get an empty score list.
inline std::vector<std::vector<TokenScore>> score_document(const LikelihoodProvider& provider,
                                                           const Document& doc) {
  std::vector<std::vector<TokenScore>> out;
  out.reserve(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const auto& tokens = doc.sentences[i].tokens;
    if (tokens.empty()) {
      out.emplace_back();
    } else {
      out.push_back(score_tokens(provider, tokens, doc.id, i));
    }
  }
  return out;
}

// exp of the mean per-token negative natural-log likelihood.
inline double perplexity(std::span<const TokenScore> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "perplexity of an empty score list");
  double nll = 0.0;
  for (const auto& s : scores) nll -= std::log(s.probability);
  return std::exp(nll / static_cast<double>(scores.size()));
}

// 2^(-(1/N) sum log2 p). Same value as perplexity(); kept as a cross-check.
inline double perplexity_base2(std::span<const TokenScore> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "perplexity of an empty score list");
  double sum = 0.0;
  for (const auto& s : scores) sum += std::log2(s.probability);
  return std::exp2(-sum / static_cast<double>(scores.size()));
}

inline double document_perplexity(const LikelihoodProvider& provider, const Document& doc) {
  std::vector<TokenScore> all;
  for (auto& sentence : score_document(provider, doc)) {
    all.insert(all.end(), sentence.begin(), sentence.end());
  }
  if (all.empty()) {
    throw Error(ErrorCode::kEmptyDocument, "document '" + doc.id + "' has no tokens");
  }
  return perplexity(all);
}

enum class Smoothing { kAddK, kWittenBell };

inline std::string_view smoothing_name(Smoothing s) {
  return s == Smoothing::kAddK ? "add-k" : "witten-bell";
}

inline Smoothing parse_smoothing(std::string_view name) {
  if (name == "add-k") return Smoothing::kAddK;
  if (name == "witten-bell") return Smoothing::kWittenBell;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown smoothing '" + std::string(name) + "' (expected add-k or witten-bell)");
}

struct NGramConfig {
  int order = 2;
  Smoothing smoothing = Smoothing::kAddK;
  double k = 1.0;
  // Tokens seen fewer times map to the unknown marker.
  std::size_t min_count = 1;
};

namespace detail {

using WordId = std::uint32_t;
using Context = std::vector<WordId>;

struct ContextHash {
  std::size_t operator()(const Context& c) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (WordId id : c) {
      h ^= id;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct ContextStats {
  std::uint64_t total = 0;
  std::unordered_map<WordId, std::uint64_t> next;
};

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// Smoothed n-gram model over lowercased tokens. Each sentence is scored
// independently with (order-1) begin markers. Models of order >= 2 also
// predict an end-of-sentence marker, so it belongs to their vocabulary; the
// unknown marker always does.
//
//   add-k:        P(w|h) = (c(h,w) + k) / (c(h) + k|V|) at the full order
//   witten-bell:  P(w|h) = (c(h,w) + T(h) P(w|h')) / (c(h) + T(h)),
//                 recursing down to the uniform 1/|V|; T(h) = distinct types
//                 seen after h.
class NGramModel final : public LikelihoodProvider {
 public:
  static constexpr std::string_view kUnknown = "<unk>";
  static constexpr std::string_view kBegin = "<s>";
  static constexpr std::string_view kEnd = "</s>";
  static constexpr std::string_view kFormatTag = "readlab-ngram";
  static constexpr std::string_view kFormatVersion = "v1";

  static NGramModel train(std::span<const std::vector<std::string>> sentences,
                          const NGramConfig& config) {
    if (config.order < 1) throw Error(ErrorCode::kInvalidArgument, "order must be >= 1");
    if (config.smoothing == Smoothing::kAddK && !(config.k > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "add-k smoothing needs k > 0");
    }
    std::map<std::string, std::size_t> frequency;
    std::size_t total_tokens = 0;
    for (const auto& sentence : sentences) {
      for (const auto& token : sentence) {
        ++frequency[to_lower(token)];
        ++total_tokens;
      }
    }
    if (total_tokens == 0) throw Error(ErrorCode::kEmptyCorpus, "training corpus has no tokens");

    std::vector<std::string> words;
    for (const auto& [word, count] : frequency) {
      if (count >= std::max<std::size_t>(config.min_count, 1)) words.push_back(word);
    }
    NGramModel model(config.order, config.smoothing, config.k, words);
    for (const auto& sentence : sentences) model.add_sentence(sentence);
    return model;
  }

  int order() const { return order_; }
  Smoothing smoothing() const { return smoothing_; }
  double k() const { return k_; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }

  // Full vocabulary including the unknown (and, for order >= 2, end) marker.
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  bool in_vocabulary(std::string_view token) const {
    return ids_.count(to_lower(token)) > 0;
  }

  // P(word | history). Only the last (order-1) history tokens matter; a
  // shorter history is padded with begin markers. "<s>" in the history is
  // the begin marker, "</s>" as the word is the end marker.
  double probability(std::span<const std::string> history, std::string_view word) const {
    return probability_of(context_for(history), lookup(word));
  }

  std::vector<TokenScore> score_sentence(std::string_view /*doc_id*/,
                                         std::size_t /*sentence_index*/,
                                         std::span<const std::string> tokens) const override {
    std::vector<TokenScore> out;
    out.reserve(tokens.size());
    Context history(static_cast<std::size_t>(order_ - 1), kBeginId);
    for (const auto& token : tokens) {
      const WordId id = lookup(token);
      out.push_back({token, probability_of(history, id), id == kUnknownId});
      if (!history.empty()) {
        history.erase(history.begin());
        history.push_back(id);
      }
    }
    return out;
  }

  void save(std::ostream& out) const {
    out << kFormatTag << ' ' << kFormatVersion << " order=" << order_
        << " smoothing=" << smoothing_name(smoothing_) << " k=" << detail::format_real(k_)
        << '\n';
    out << "\\data\\\n";
    out << "vocab=" << vocabulary_.size() << '\n';
    std::vector<std::vector<std::string>> sections(static_cast<std::size_t>(order_));
    for (int m = 1; m <= order_; ++m) {
      auto& lines = sections[static_cast<std::size_t>(m - 1)];
      for (const auto& [context, stats] : tables_[static_cast<std::size_t>(m - 1)]) {
        std::string prefix;
        for (WordId id : context) {
          prefix += name_of(id);
          prefix += ' ';
        }
        for (const auto& [word, count] : stats.next) {
          lines.push_back(std::to_string(count) + '\t' + prefix + name_of(word));
        }
      }
      std::sort(lines.begin(), lines.end(), [](const std::string& a, const std::string& b) {
        return a.substr(a.find('\t')) < b.substr(b.find('\t'));
      });
      out << "ngram " << m << '=' << lines.size() << '\n';
    }
    out << "\n\\vocab\\\n";
    for (const auto& w : vocabulary_) out << w << '\n';
    for (int m = 1; m <= order_; ++m) {
      out << "\n\\" << m << "-grams:\n";
      for (const auto& line : sections[static_cast<std::size_t>(m - 1)]) out << line << '\n';
    }
    out << "\n\\end\\\n";
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write model " + path.string());
    save(out);
    if (!out) throw Error(ErrorCode::kIoError, "write failed for model " + path.string());
  }

  static NGramModel load(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
      if (!std::getline(in, line)) return false;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    };
    auto schema_error = [&](const std::string& what) {
      return Error(ErrorCode::kSchemaError, source + ":" + std::to_string(line_no) + ": " + what);
    };

    if (!next_line()) throw Error(ErrorCode::kVersionMismatch, source + ": empty model file");
    const Header header = parse_header(line, source);

    std::vector<std::string> vocabulary;
    std::vector<std::vector<std::pair<std::uint64_t, std::vector<std::string>>>> grams(
        static_cast<std::size_t>(header.order));
    enum class Section { kNone, kData, kVocab, kGrams, kEnd } section = Section::kNone;
    std::size_t gram_order = 0;
    while (next_line()) {
      if (line.empty()) continue;
      if (line == "\\data\\") {
        section = Section::kData;
      } else if (line == "\\vocab\\") {
        section = Section::kVocab;
      } else if (line == "\\end\\") {
        section = Section::kEnd;
        break;
      } else if (line.front() == '\\' && line.size() > 8 &&
                 line.compare(line.size() - 7, 7, "-grams:") == 0) {
        gram_order = static_cast<std::size_t>(std::stoul(line.substr(1)));
        if (gram_order < 1 || gram_order > grams.size()) {
          throw schema_error("section order outside 1.." + std::to_string(header.order));
        }
        section = Section::kGrams;
      } else if (section == Section::kData) {
        continue;
      } else if (section == Section::kVocab) {
        vocabulary.push_back(line);
      } else if (section == Section::kGrams) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw schema_error("expected 'count<TAB>tokens'");
        std::uint64_t count = 0;
        try {
          count = std::stoull(line.substr(0, tab));
        } catch (const std::exception&) {
          throw schema_error("bad count");
        }
        std::vector<std::string> tokens;
        std::istringstream fields(line.substr(tab + 1));
        for (std::string t; fields >> t;) tokens.push_back(t);
        if (tokens.size() != gram_order) {
          throw schema_error("expected " + std::to_string(gram_order) + " tokens");
        }
        grams[gram_order - 1].push_back({count, std::move(tokens)});
      } else {
        throw schema_error("unexpected line outside any section");
      }
    }
    if (section != Section::kEnd) throw schema_error("missing \\end\\ marker");

    std::vector<std::string> words;
    for (const auto& w : vocabulary) {
      if (w != kUnknown && w != kEnd) words.push_back(w);
    }
    NGramModel model(header.order, header.smoothing, header.k, words);
    if (model.vocabulary_ != vocabulary) {
      throw Error(ErrorCode::kSchemaError, source + ": vocabulary section is malformed");
    }
    for (std::size_t m = 0; m < grams.size(); ++m) {
      for (const auto& [count, tokens] : grams[m]) {
        Context context;
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
          context.push_back(tokens[i] == kBegin ? kBeginId : model.strict_id(tokens[i], source));
        }
        const WordId word = model.strict_id(tokens.back(), source);
        auto& stats = model.tables_[m][context];
        stats.next[word] += count;
        stats.total += count;
      }
    }
    return model;
  }

  static NGramModel load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kMissingFile, "cannot open model " + path.string());
    return load(in, path.string());
  }

 private:
  using WordId = detail::WordId;
  using Context = detail::Context;

  static constexpr WordId kUnknownId = 0;
  static constexpr WordId kBeginId = UINT32_MAX;

  struct Header {
    int order;
    Smoothing smoothing;
    double k;
  };

  NGramModel(int order, Smoothing smoothing, double k, const std::vector<std::string>& words)
      : order_(order), smoothing_(smoothing), k_(k),
        tables_(static_cast<std::size_t>(order)) {
    vocabulary_.emplace_back(kUnknown);
    if (order_ >= 2) vocabulary_.emplace_back(kEnd);
    vocabulary_.insert(vocabulary_.end(), words.begin(), words.end());
    for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
      ids_.emplace(vocabulary_[i], static_cast<WordId>(i));
    }
  }

  static Header parse_header(const std::string& line, const std::string& source) {
    std::istringstream fields(line);
    std::string tag, version, order, smoothing, k, extra;
    fields >> tag >> version >> order >> smoothing >> k;
    auto mismatch = [&]() {
      return Error(ErrorCode::kVersionMismatch,
                   source + ": expected header '" + std::string(kFormatTag) + " " +
                       std::string(kFormatVersion) + " order=N smoothing=S k=K', got '" + line +
                       "'");
    };
    if (tag != kFormatTag || version != kFormatVersion || (fields >> extra) ||
        order.rfind("order=", 0) != 0 || smoothing.rfind("smoothing=", 0) != 0 ||
        k.rfind("k=", 0) != 0) {
      throw mismatch();
    }
    Header h{};
    try {
      h.order = std::stoi(order.substr(6));
      h.smoothing = parse_smoothing(smoothing.substr(10));
      h.k = std::stod(k.substr(2));
    } catch (const std::exception&) {
      throw mismatch();
    }
    if (h.order < 1) throw mismatch();
    return h;
  }

  WordId lookup(std::string_view token) const {
    if (token == kEnd && order_ >= 2) return ids_.at(std::string(kEnd));
    const auto it = ids_.find(to_lower(token));
    return it == ids_.end() ? kUnknownId : it->second;
  }

  WordId strict_id(const std::string& token, const std::string& source) const {
    const auto it = ids_.find(token);
    if (it == ids_.end()) {
      throw Error(ErrorCode::kSchemaError, source + ": n-gram token '" + token +
                                               "' missing from vocabulary section");
    }
    return it->second;
  }

  const std::string& name_of(WordId id) const {
    static const std::string kBeginName(kBegin);
    return id == kBeginId ? kBeginName : vocabulary_[id];
  }

  Context context_for(std::span<const std::string> history) const {
    const auto width = static_cast<std::size_t>(order_ - 1);
    Context context(width, kBeginId);
    const std::size_t take = std::min(width, history.size());
    for (std::size_t i = 0; i < take; ++i) {
      const auto& token = history[history.size() - take + i];
      context[width - take + i] = token == kBegin ? kBeginId : lookup(token);
    }
    return context;
  }

  void add_sentence(const std::vector<std::string>& sentence) {
    const auto width = static_cast<std::size_t>(order_ - 1);
    std::vector<WordId> sequence(width, kBeginId);
    for (const auto& token : sentence) sequence.push_back(lookup(token));
    if (order_ >= 2) sequence.push_back(ids_.at(std::string(kEnd)));
    for (std::size_t i = width; i < sequence.size(); ++i) {
      for (std::size_t m = 1; m <= static_cast<std::size_t>(order_); ++m) {
        Context context(sequence.begin() + static_cast<std::ptrdiff_t>(i - (m - 1)),
                        sequence.begin() + static_cast<std::ptrdiff_t>(i));
        auto& stats = tables_[m - 1][context];
        ++stats.next[sequence[i]];
        ++stats.total;
      }
    }
  }

  // `context` always holds exactly (order-1) ids.
  double probability_of(const Context& context, WordId word) const {
    const double uniform = 1.0 / static_cast<double>(vocabulary_.size());
    if (smoothing_ == Smoothing::kAddK) {
      const auto& table = tables_.back();
      const auto it = table.find(context);
      if (it == table.end()) return uniform;
      const auto& stats = it->second;
      const auto w = stats.next.find(word);
      const double c_hw = w == stats.next.end() ? 0.0 : static_cast<double>(w->second);
      return (c_hw + k_) /
             (static_cast<double>(stats.total) + k_ * static_cast<double>(vocabulary_.size()));
    }
    double p = uniform;
    for (std::size_t m = 1; m <= static_cast<std::size_t>(order_); ++m) {
      const Context suffix(context.end() - static_cast<std::ptrdiff_t>(m - 1), context.end());
      const auto& table = tables_[m - 1];
      const auto it = table.find(suffix);
      if (it == table.end() || it->second.total == 0) continue;
      const auto& stats = it->second;
      const auto w = stats.next.find(word);
      const double c_hw = w == stats.next.end() ? 0.0 : static_cast<double>(w->second);
      const auto types = static_cast<double>(stats.next.size());
      p = (c_hw + types * p) / (static_cast<double>(stats.total) + types);
    }
    return p;
  }

  int order_;
  Smoothing smoothing_;
  double k_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, WordId> ids_;
  // tables_[m-1]: context of length m-1 -> counts of the following word.
  std::vector<std::unordered_map<Context, detail::ContextStats, detail::ContextHash>> tables_;
};

// Token scores produced elsewhere (typically a neural model), read from JSONL:
//   {"doc_id": str, "sentences": [[{"token": str, "logprob": float, "oov": bool}, ...], ...]}
// with natural-log probabilities. Sentence lists align with the document's
// sentence segmentation.
class PrecomputedScores final : public LikelihoodProvider {
 public:
  static PrecomputedScores parse(std::istream& in, const std::string& source = "<stream>") {
    PrecomputedScores scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto fail = [&](const std::string& what) {
        return Error(ErrorCode::kSchemaError,
                     source + ":" + std::to_string(line_no) + ": " + what);
      };
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw fail(std::string("invalid JSON: ") + e.what());
      }
      if (!j.is_object() || !j.contains("doc_id") || !j["doc_id"].is_string() ||
          !j.contains("sentences") || !j["sentences"].is_array()) {
        throw fail("expected object with string 'doc_id' and array 'sentences'");
      }
      std::vector<std::vector<TokenScore>> sentences;
      for (const auto& sentence : j["sentences"]) {
        if (!sentence.is_array()) throw fail("each sentence must be an array");
        std::vector<TokenScore> tokens;
        for (const auto& t : sentence) {
          if (!t.is_object() || !t.contains("token") || !t["token"].is_string() ||
              !t.contains("logprob") || !t["logprob"].is_number() || !t.contains("oov") ||
              !t["oov"].is_boolean()) {
            throw fail("token entries need string 'token', number 'logprob', bool 'oov'");
          }
          const double logprob = t["logprob"].get<double>();
          if (!std::isfinite(logprob) || logprob > 0.0) {
            throw fail("logprob must be finite and <= 0");
          }
          tokens.push_back({t["token"].get<std::string>(), std::exp(logprob), t["oov"].get<bool>()});
        }
        sentences.push_back(std::move(tokens));
      }
      auto id = j["doc_id"].get<std::string>();
      if (!scores.docs_.emplace(id, std::move(sentences)).second) {
        throw fail("duplicate doc_id '" + id + "'");
      }
    }
    return scores;
  }

  static PrecomputedScores load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kMissingFile, "cannot open score file " + path.string());
    return parse(in, path.string());
  }

  bool contains(std::string_view doc_id) const { return docs_.count(std::string(doc_id)) > 0; }
  std::size_t size() const { return docs_.size(); }

  std::vector<TokenScore> score_sentence(std::string_view doc_id, std::size_t sentence_index,
                                         std::span<const std::string> tokens) const override {
    const auto it = docs_.find(std::string(doc_id));
    if (it == docs_.end()) {
      throw Error(ErrorCode::kMissingDocument, "no precomputed scores for '" + std::string(doc_id) + "'");
    }
    const auto& sentences = it->second;
    if (sentence_index >= sentences.size()) {
      throw Error(ErrorCode::kProviderFailure,
                  "document '" + std::string(doc_id) + "' has no sentence " +
                      std::to_string(sentence_index));
    }
    const auto& stored = sentences[sentence_index];
    if (stored.size() != tokens.size()) {
      throw Error(ErrorCode::kProviderFailure,
                  "document '" + std::string(doc_id) + "' sentence " +
                      std::to_string(sentence_index) + ": stored " + std::to_string(stored.size()) +
                      " tokens, text has " + std::to_string(tokens.size()));
    }
    return stored;
  }

 private:
  std::unordered_map<std::string, std::vector<std::vector<TokenScore>>> docs_;
};

// One JSONL record in the precomputed-score format for `doc`.
inline nlohmann::ordered_json export_scores(const LikelihoodProvider& provider,
                                            const Document& doc) {
  nlohmann::ordered_json sentences = nlohmann::ordered_json::array();
  for (const auto& sentence : score_document(provider, doc)) {
    nlohmann::ordered_json tokens = nlohmann::ordered_json::array();
    for (const auto& s : sentence) {
      tokens.push_back({{"token", s.token}, {"logprob", std::log(s.probability)}, {"oov", s.oov}});
    }
    sentences.push_back(std::move(tokens));
  }
  return {{"doc_id", doc.id}, {"sentences", std::move(sentences)}};
}

}  // namespace readlab
