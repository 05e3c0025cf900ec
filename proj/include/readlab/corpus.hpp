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
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "readlab/error.hpp"
#include "readlab/random.hpp"
#include "readlab/textseg.hpp"

namespace readlab {

struct LabeledCorpus {
  std::vector<Document> documents;
  std::vector<int> labels;                    // ordinal class per document
  std::vector<std::string> class_names;       // index = class
  std::vector<std::filesystem::path> paths;   // backing file per document, may be empty
  std::filesystem::path manifest;

  std::size_t size() const { return documents.size(); }
  std::size_t n_classes() const { return class_names.size(); }

  std::vector<std::vector<std::size_t>> indices_by_class() const {
    std::vector<std::vector<std::size_t>> by_class(n_classes());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    return by_class;
  }

  LabeledCorpus subset(std::span<const std::size_t> indices) const {
    LabeledCorpus out;
    out.class_names = class_names;
    out.manifest = manifest;
    for (std::size_t i : indices) {
      out.documents.push_back(documents[i]);
      out.labels.push_back(labels[i]);
      if (!paths.empty()) out.paths.push_back(paths[i]);
    }
    return out;
  }
};

inline constexpr std::string_view kManifestHeader = "doc_path\tclass_name\tclass_index";

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Reads a TSV manifest (header `doc_path<TAB>class_name<TAB>class_index`,
// leading '#' comment lines allowed). Document ids are the doc_path values as
// written; paths resolve relative to the manifest's directory.
inline LabeledCorpus load_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open manifest " + manifest_path.string());
  const auto base = manifest_path.parent_path();
  const std::string source = manifest_path.string();

  LabeledCorpus corpus;
  corpus.manifest = manifest_path;
  std::map<int, std::string> names;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto bad_row = [&](const std::string& what) {
    return Error(ErrorCode::kBadRow, source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line.empty() || line.front() == '#') continue;
      if (line != kManifestHeader) throw bad_row("expected header 'doc_path\\tclass_name\\tclass_index'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      fields.push_back(line.substr(start, tab - start));
    }
    fields.push_back(line.substr(start));
    if (fields.size() != 3) throw bad_row("expected 3 tab-separated fields");
    const auto& doc_path = fields[0];
    if (doc_path.empty()) throw bad_row("empty doc_path");
    int class_index = -1;
    try {
      std::size_t used = 0;
      class_index = std::stoi(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw bad_row("class_index '" + fields[2] + "' is not an integer");
    }
    if (class_index < 0) throw bad_row("negative class_index");
    if (!seen.insert(doc_path).second) throw bad_row("duplicate doc id '" + doc_path + "'");
    const auto [it, inserted] = names.emplace(class_index, fields[1]);
    if (!inserted && it->second != fields[1]) {
      throw bad_row("class_index " + fields[2] + " named both '" + it->second + "' and '" +
                    fields[1] + "'");
    }
    const auto path = base / doc_path;
    corpus.documents.push_back(make_document(doc_path, read_text_file(path)));
    corpus.labels.push_back(class_index);
    corpus.paths.push_back(path);
  }
  if (!header_seen) {
    throw Error(ErrorCode::kBadRow, source + ": missing manifest header");
  }
  int expected = 0;
  for (const auto& [index, name] : names) {
    if (index != expected) {
      throw Error(ErrorCode::kNonContiguousClasses,
                  source + ": class indices must be 0.." + std::to_string(names.size() - 1) +
                      ", found " + std::to_string(index) + " where " + std::to_string(expected) +
                      " was expected");
    }
    corpus.class_names.push_back(name);
    ++expected;
  }
  return corpus;
}

// Writes a manifest whose doc_path entries are relative to the manifest's
// directory. Every document needs a backing path.
inline void write_manifest(const LabeledCorpus& corpus, std::ostream& out,
                           const std::filesystem::path& manifest_dir) {
  out << kManifestHeader << '\n';
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (i >= corpus.paths.size() || corpus.paths[i].empty()) {
      throw Error(ErrorCode::kIoError,
                  "document '" + corpus.documents[i].id + "' has no backing file");
    }
    const auto rel = std::filesystem::proximate(corpus.paths[i], manifest_dir).generic_string();
    const auto label = static_cast<std::size_t>(corpus.labels[i]);
    out << rel << '\t' << corpus.class_names[label] << '\t' << label << '\n';
  }
}

// Maps a document id onto a single safe file name.
inline std::string file_name_for(std::string_view id) {
  std::string name;
  for (char ch : id) {
    const bool safe = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' ||
                      ch == '_' || ch == '#' || (static_cast<unsigned char>(ch) >= 0x80);
    name.push_back(safe ? ch : '_');
  }
  if (name.empty() || name == "." || name == "..") name = "_" + name;
  return name;
}

// Splits a segmented document into consecutive chunks of `n` sentences. A
// trailing remainder shorter than `min_tail` is merged into the previous
// chunk. Chunk ids are "{doc_id}#k", k counting from 0.
inline std::vector<Document> chunk_document(const Document& doc, std::size_t n,
                                            std::size_t min_tail = 1) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "chunk size must be >= 1");
  std::vector<std::vector<Sentence>> groups;
  for (std::size_t start = 0; start < doc.sentences.size(); start += n) {
    const std::size_t end = std::min(start + n, doc.sentences.size());
    std::vector<Sentence> group(doc.sentences.begin() + static_cast<std::ptrdiff_t>(start),
                                doc.sentences.begin() + static_cast<std::ptrdiff_t>(end));
    const bool short_tail = end - start < n && end - start < min_tail && !groups.empty();
    if (short_tail) {
      groups.back().insert(groups.back().end(), group.begin(), group.end());
    } else {
      groups.push_back(std::move(group));
    }
  }
  std::vector<Document> chunks;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    Document chunk;
    chunk.id = doc.id + "#" + std::to_string(k);
    for (std::size_t i = 0; i < groups[k].size(); ++i) {
      if (i > 0) chunk.raw_text += ' ';
      chunk.raw_text += groups[k][i].text;
    }
    chunk.sentences = std::move(groups[k]);
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

inline LabeledCorpus chunk_corpus(const LabeledCorpus& corpus, std::size_t n,
                                  std::size_t min_tail = 1) {
  LabeledCorpus out;
  out.class_names = corpus.class_names;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (auto& chunk : chunk_document(corpus.documents[i], n, min_tail)) {
      out.documents.push_back(std::move(chunk));
      out.labels.push_back(corpus.labels[i]);
    }
  }
  return out;
}

// Writes each document's raw text under `dir` (file name derived from the
// id) and records the paths on the corpus.
inline void write_documents(LabeledCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  corpus.paths.clear();
  for (const auto& doc : corpus.documents) {
    const auto path = dir / file_name_for(doc.id);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    out << doc.raw_text;
    if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
    corpus.paths.push_back(path);
  }
}

struct SplitSpec {
  std::array<double, 3> ratios{0.8, 0.1, 0.1};  // train, validation, test
  std::uint64_t seed = 0;
};

// Document indices (ascending) of each part plus the per-class allocation.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  std::vector<std::array<std::size_t, 3>> allocation;  // per class: train, validation, test

  friend bool operator==(const Split&, const Split&) = default;
};

// Largest-remainder apportionment of `n` items over the ratios; leftover
// items go to the largest fractional parts, earlier parts first on ties.
inline std::array<std::size_t, 3> largest_remainder(std::size_t n,
                                                    const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    const double quota = static_cast<double>(n) * ratios[j];
    const double floor = std::floor(quota + 1e-9);
    counts[j] = static_cast<std::size_t>(floor);
    remainders[j] = std::max(0.0, quota - floor);
    assigned += counts[j];
  }
  while (assigned > n) {
    // only reachable through rounding slack; take back from the largest part
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b] + 1e-12; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % 3) {
    ++counts[order[i]];
    ++assigned;
  }
  return counts;
}

namespace detail {

inline void validate_ratios(const std::array<double, 3>& ratios) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "split ratios must be >= 0");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must sum to 1");
  }
}

}  // namespace detail

// Per class: seeded shuffle, then largest-remainder allocation over the
// ratios. Classes are processed in index order from one generator.
inline Split stratified_split(const LabeledCorpus& corpus, const SplitSpec& spec) {
  detail::validate_ratios(spec.ratios);
  Rng rng(spec.seed);
  Split split;
  const auto by_class = corpus.indices_by_class();
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].empty()) {
      throw Error(ErrorCode::kEmptyClass, "class " + std::to_string(c) + " ('" +
                                              corpus.class_names[c] + "') has no documents");
    }
  }
  for (auto members : by_class) {
    rng.shuffle(members);
    const auto counts = largest_remainder(members.size(), spec.ratios);
    auto it = members.begin();
    for (std::size_t j = 0; j < 3; ++j) {
      auto& part = j == 0 ? split.train : (j == 1 ? split.validation : split.test);
      part.insert(part.end(), it, it + static_cast<std::ptrdiff_t>(counts[j]));
      it += static_cast<std::ptrdiff_t>(counts[j]);
    }
    split.allocation.push_back(counts);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

// k rounds. Each class is shuffled and cut into k near-equal folds (the
// first size % k folds get one extra document). Round i tests on fold i,
// validates on fold (i+1) mod k and trains on the rest.
inline std::vector<Split> stratified_kfold(const LabeledCorpus& corpus, std::size_t k,
                                           std::uint64_t seed) {
  if (k < 3) {
    throw Error(ErrorCode::kInvalidArgument, "k-fold needs k >= 3 so every round has a train part");
  }
  Rng rng(seed);
  const auto by_class = corpus.indices_by_class();
  std::vector<std::vector<std::vector<std::size_t>>> folds;  // class -> fold -> docs
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto members = by_class[c];
    if (members.size() < k) {
      throw Error(ErrorCode::kClassSmallerThanK,
                  "class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                      " documents, fewer than k=" + std::to_string(k));
    }
    rng.shuffle(members);
    std::vector<std::vector<std::size_t>> class_folds(k);
    const std::size_t base = members.size() / k;
    const std::size_t extra = members.size() % k;
    auto it = members.begin();
    for (std::size_t f = 0; f < k; ++f) {
      const auto size = static_cast<std::ptrdiff_t>(base + (f < extra ? 1 : 0));
      class_folds[f].assign(it, it + size);
      it += size;
    }
    folds.push_back(std::move(class_folds));
  }
  std::vector<Split> rounds;
  for (std::size_t i = 0; i < k; ++i) {
    Split split;
    const std::size_t val_fold = (i + 1) % k;
    for (const auto& class_folds : folds) {
      std::array<std::size_t, 3> counts{};
      for (std::size_t f = 0; f < k; ++f) {
        auto& part = f == i ? split.test : (f == val_fold ? split.validation : split.train);
        part.insert(part.end(), class_folds[f].begin(), class_folds[f].end());
        counts[f == i ? 2 : (f == val_fold ? 1 : 0)] += class_folds[f].size();
      }
      split.allocation.push_back(counts);
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    rounds.push_back(std::move(split));
  }
  return rounds;
}

inline nlohmann::ordered_json split_record(const LabeledCorpus& corpus, const Split& split,
                                           const SplitSpec& spec) {
  auto ids = [&](const std::vector<std::size_t>& part) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (std::size_t i : part) list.push_back(corpus.documents[i].id);
    return list;
  };
  nlohmann::ordered_json allocation = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < split.allocation.size(); ++c) {
    allocation.push_back({{"class", corpus.class_names[c]},
                          {"train", split.allocation[c][0]},
                          {"validation", split.allocation[c][1]},
                          {"test", split.allocation[c][2]}});
  }
  return {{"seed", spec.seed},
          {"ratios", {spec.ratios[0], spec.ratios[1], spec.ratios[2]}},
          {"allocation", allocation},
          {"train", ids(split.train)},
          {"validation", ids(split.validation)},
          {"test", ids(split.test)}};
}

struct SyntheticSpec {
  std::size_t n_classes = 3;
  std::size_t docs_per_class = 50;
  std::uint64_t seed = 0;
  std::size_t base_sentence_length = 8;  // mean words per sentence for class 0
  std::size_t length_step = 4;           // added per class
  std::size_t length_jitter = 2;         // sentence lengths uniform in mean +- jitter
  double base_rare_rate = 0.05;          // share of rare words in class 0
  double rare_rate_step = 0.10;          // added per class
  std::size_t min_sentences = 10;
  std::size_t max_sentences = 14;
};

namespace detail {

// Fixed two-tier vocabulary, independent of the corpus seed. Common words
// are 1-2 open CV syllables (at most 4 letters); rare words are 3-4 closed
// CVC syllables (9-12 letters), so they are both long and polysyllabic under
// every syllable profile. The vowels avoid 'e' and 'y' to keep syllable
// counts exact.
struct SyntheticVocabulary {
  std::vector<std::string> common;
  std::vector<std::string> rare;
};

inline const SyntheticVocabulary& synthetic_vocabulary() {
  static const SyntheticVocabulary vocab = [] {
    constexpr std::string_view kConsonants = "bdfgklmnprstvz";
    constexpr std::string_view kVowels = "aiou";
    Rng rng(0x5EEDC0DEULL);
    auto consonant = [&] { return kConsonants[rng.below(kConsonants.size())]; };
    auto vowel = [&] { return kVowels[rng.below(kVowels.size())]; };
    SyntheticVocabulary v;
    std::set<std::string> used;
    while (v.common.size() < 300) {
      std::string w;
      const auto syllables = 1 + rng.below(2);
      for (std::uint64_t s = 0; s < syllables; ++s) {
        w += consonant();
        w += vowel();
      }
      // a word that doubles as an abbreviation would suppress sentence breaks
      if (abbreviations().count(w) > 0) continue;
      if (used.insert(w).second) v.common.push_back(w);
    }
    while (v.rare.size() < 1500) {
      std::string w;
      const auto syllables = 3 + rng.below(2);
      for (std::uint64_t s = 0; s < syllables; ++s) {
        w += consonant();
        w += vowel();
        w += consonant();
      }
      if (used.insert(w).second) v.rare.push_back(w);
    }
    return v;
  }();
  return vocab;
}

}  // namespace detail

// Graded corpus whose difficulty grows with the class index: longer
// sentences and more rare, long, polysyllabic words. Fully determined by the
// spec (including seed).
inline LabeledCorpus generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_classes < 2) throw Error(ErrorCode::kInvalidArgument, "synthetic corpus needs >= 2 classes");
  if (spec.min_sentences == 0 || spec.min_sentences > spec.max_sentences) {
    throw Error(ErrorCode::kInvalidArgument, "bad sentence count range");
  }
  const auto& vocab = detail::synthetic_vocabulary();
  Rng rng(spec.seed);
  LabeledCorpus corpus;
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    corpus.class_names.push_back("level" + std::to_string(c));
  }
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    const std::size_t mean_length = spec.base_sentence_length + c * spec.length_step;
    const double rare_rate =
        std::min(0.9, spec.base_rare_rate + spec.rare_rate_step * static_cast<double>(c));
    for (std::size_t d = 0; d < spec.docs_per_class; ++d) {
      const auto n_sentences = static_cast<std::size_t>(
          rng.between(static_cast<std::int64_t>(spec.min_sentences),
                      static_cast<std::int64_t>(spec.max_sentences)));
      std::string text;
      for (std::size_t s = 0; s < n_sentences; ++s) {
        const auto lo = static_cast<std::int64_t>(
            mean_length > spec.length_jitter ? mean_length - spec.length_jitter : 1);
        const auto hi = static_cast<std::int64_t>(mean_length + spec.length_jitter);
        const auto length = static_cast<std::size_t>(rng.between(lo, hi));
        if (!text.empty()) text += ' ';
        for (std::size_t w = 0; w < length; ++w) {
          std::string word;
          if (rng.bernoulli(rare_rate)) {
            word = vocab.rare[rng.below(vocab.rare.size())];
          } else {
            // skewed towards the head of the list, roughly Zipf-like
            const double u = rng.unit();
            word = vocab.common[static_cast<std::size_t>(u * u * static_cast<double>(vocab.common.size()))];
          }
          if (w == 0) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
          if (w > 0) text += ' ';
          text += word;
        }
        text += '.';
      }
      char id[64];
      std::snprintf(id, sizeof id, "class%zu_%04zu.txt", c, d);
      corpus.documents.push_back(make_document(id, std::move(text)));
      corpus.labels.push_back(static_cast<int>(c));
    }
  }
  return corpus;
}

inline LabeledCorpus generate_synthetic(std::size_t n_classes, std::size_t docs_per_class,
                                        std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_classes = n_classes;
  spec.docs_per_class = docs_per_class;
  spec.seed = seed;
  return generate_synthetic(spec);
}

}  // namespace readlab
