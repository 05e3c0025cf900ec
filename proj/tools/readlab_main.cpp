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


// readlab: readability measures, language-model scores and evaluation.
//
//   readlab synth --classes 3 --docs-per-class 50 --out-dir corpus/
//   readlab train-lm --input corpus/manifest.tsv --order 2 --out model.lm
//   readlab eval-unsup --input corpus/manifest.tsv --model model.lm --out-dir report/
//   readlab eval-sup --gold corpus/manifest.tsv --train-baseline --folds 5 --out-dir sup/
//
// Exit codes: 0 success, 2 usage, 3 input/schema, 4 degenerate data,
// 5 internal error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "readlab/readlab.hpp"

namespace fs = std::filesystem;
using readlab::Error;
using readlab::ErrorCode;

namespace {

enum class Format { kJson, kCsv, kTable };

const std::map<std::string, Format> kFormats = {
    {"json", Format::kJson}, {"csv", Format::kCsv}, {"table", Format::kTable}};

// Options shared by commands that read documents.
struct InputOptions {
  std::string manifest;
  std::vector<std::string> docs;
  std::string lang = "en";
  std::string wordlist;

  void add_to(CLI::App* cmd, bool with_lexicon = true) {
    cmd->add_option("--input", manifest, "Labeled manifest TSV");
    cmd->add_option("--doc", docs, "Plain-text document(s); the path is the doc id");
    if (with_lexicon) {
      cmd->add_option("--lang", lang, "Syllable profile")->check(CLI::IsMember({"en", "sl"}));
      cmd->add_option("--wordlist", wordlist, "Dale-Chall word list (one word per line)");
    }
  }

  readlab::LabeledCorpus load() const {
    if (manifest.empty() == docs.empty()) {
      throw Error(ErrorCode::kUsage, "give either --input MANIFEST or one or more --doc FILE");
    }
    if (!manifest.empty()) return readlab::load_manifest(manifest);
    readlab::LabeledCorpus corpus;
    corpus.class_names = {"unlabeled"};
    for (const auto& path : docs) {
      corpus.documents.push_back(readlab::make_document(path, readlab::read_text_file(path)));
      corpus.labels.push_back(0);
      corpus.paths.emplace_back(path);
    }
    return corpus;
  }

  readlab::WordList load_wordlist() const {
    return wordlist.empty() ? readlab::WordList{} : readlab::WordList::load(wordlist);
  }

  std::string canonical() const {
    std::string s = "input=" + manifest + ";docs=";
    for (const auto& d : docs) s += d + ",";
    return s + ";lang=" + lang + ";wordlist=" + wordlist;
  }
};

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    readlab::write_file_atomic(out_path, content);
  }
}

std::string render_rows(Format format, const readlab::RunMetadata& run,
                        const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows,
                        const nlohmann::ordered_json& json_rows) {
  if (format == Format::kJson) {
    return nlohmann::ordered_json{{"run", run.to_json()}, {"documents", json_rows}}.dump(2) + "\n";
  }
  if (format == Format::kCsv) {
    std::ostringstream out;
    out << run.comment_line() << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return out.str();
  }
  std::vector<std::vector<std::string>> cells{header};
  cells.insert(cells.end(), rows.begin(), rows.end());
  return run.comment_line() + "\n" + readlab::RankingTable::render_columns(cells);
}

std::vector<double> parse_ratios(const std::string& text) {
  std::vector<double> ratios;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    try {
      ratios.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kUsage, "bad ratio '" + part + "'");
    }
  }
  if (ratios.size() != 3) throw Error(ErrorCode::kUsage, "--ratios needs train,validation,test");
  return ratios;
}

std::vector<std::vector<std::string>> token_sentences(const readlab::LabeledCorpus& corpus) {
  std::vector<std::vector<std::string>> sentences;
  for (const auto& doc : corpus.documents) {
    for (const auto& s : doc.sentences) {
      if (!s.tokens.empty()) sentences.push_back(s.tokens);
    }
  }
  return sentences;
}

void write_corpus(readlab::LabeledCorpus corpus, const fs::path& out_dir,
                  const readlab::RunMetadata& run) {
  readlab::write_documents(corpus, out_dir / "docs");
  std::ostringstream manifest;
  manifest << run.comment_line() << '\n';
  readlab::write_manifest(corpus, manifest, out_dir);
  readlab::write_file_atomic(out_dir / "manifest.tsv", manifest.str());
}

std::string summary(Format format, const readlab::RunMetadata& run,
                    const nlohmann::ordered_json& fields) {
  if (format == Format::kJson) {
    nlohmann::ordered_json out{{"run", run.to_json()}};
    for (const auto& [k, v] : fields.items()) out[k] = v;
    return out.dump(2) + "\n";
  }
  std::ostringstream text;
  text << run.comment_line() << '\n';
  if (format == Format::kCsv) {
    std::string keys, values;
    for (const auto& [k, v] : fields.items()) {
      keys += (keys.empty() ? "" : ",") + k;
      values += (values.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
    }
    text << keys << '\n' << values << '\n';
  } else {
    for (const auto& [k, v] : fields.items()) {
      text << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  }
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Readability measures, language-model scores and evaluation harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(readlab::kVersion));

  std::uint64_t seed = 0;
  Format format = Format::kTable;
  std::string out;
  std::string out_dir;
  std::string gfi_variant = "paper";
  std::vector<CLI::Option*> format_options;
  auto common = [&](CLI::App* cmd, Format default_format) {
    format = default_format;
    cmd->add_option("--seed", seed, "Seed for every random choice (default 0)");
    format_options.push_back(
        cmd->add_option("--format", format, "Output format (default: from --out extension, else table)")
            ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
            ->option_text("{json,csv,table}"));
  };

  // profile
  InputOptions profile_in;
  auto* profile_cmd = app.add_subcommand("profile", "Surface counts per document");
  profile_in.add_to(profile_cmd);
  profile_cmd->add_option("--out", out, "Output file (default stdout)");
  common(profile_cmd, Format::kTable);

  // score
  InputOptions score_in;
  std::vector<std::string> score_measures;
  auto* score_cmd = app.add_subcommand("score", "Traditional readability formulas per document");
  score_in.add_to(score_cmd);
  score_cmd->add_option("--measures", score_measures, "Subset of GFI FRE FKGL ARI DCRF SMOG ASL");
  score_cmd->add_option("--gfi-variant", gfi_variant)->check(CLI::IsMember({"paper", "standard"}));
  score_cmd->add_option("--out", out, "Output file (default stdout)");
  common(score_cmd, Format::kTable);

  // train-lm
  InputOptions lm_in;
  int order = 2;
  std::string smoothing = "add-k";
  double k = 1.0;
  std::size_t min_count = 1;
  auto* lm_cmd = app.add_subcommand("train-lm", "Train the n-gram reference language model");
  lm_in.add_to(lm_cmd, false);
  lm_cmd->add_option("--order", order)->check(CLI::Range(1, 9));
  lm_cmd->add_option("--smoothing", smoothing)->check(CLI::IsMember({"add-k", "witten-bell"}));
  lm_cmd->add_option("--k", k, "Additive constant for add-k")->check(CLI::PositiveNumber);
  lm_cmd->add_option("--min-count", min_count, "Rarer tokens map to <unk>");
  lm_cmd->add_option("--out", out, "Model file")->required();
  common(lm_cmd, Format::kTable);

  // rsrs
  InputOptions rsrs_in;
  std::string model_path;
  std::string precomputed_path;
  auto* rsrs_cmd = app.add_subcommand("rsrs", "RSRS and perplexity per document");
  rsrs_in.add_to(rsrs_cmd, false);
  rsrs_cmd->add_option("--model", model_path, "n-gram model file");
  rsrs_cmd->add_option("--precomputed", precomputed_path, "JSONL token scores");
  rsrs_cmd->add_option("--out", out, "Output file (default stdout)");
  common(rsrs_cmd, Format::kCsv);

  // export-scores
  InputOptions export_in;
  auto* export_cmd = app.add_subcommand("export-scores", "Write n-gram token scores as precomputed JSONL");
  export_in.add_to(export_cmd, false);
  export_cmd->add_option("--model", model_path, "n-gram model file")->required();
  export_cmd->add_option("--out", out, "JSONL output")->required();
  common(export_cmd, Format::kTable);

  // chunk
  InputOptions chunk_in;
  std::size_t chunk_n = 25;
  std::size_t min_tail = 1;
  auto* chunk_cmd = app.add_subcommand("chunk", "Split documents into fixed-size sentence chunks");
  chunk_in.add_to(chunk_cmd, false);
  chunk_cmd->add_option("--n", chunk_n, "Sentences per chunk")->check(CLI::PositiveNumber);
  chunk_cmd->add_option("--min-tail", min_tail, "Shorter remainders merge into the previous chunk");
  chunk_cmd->add_option("--out-dir", out_dir)->required();
  common(chunk_cmd, Format::kTable);

  // split
  std::string split_manifest;
  std::string ratios_text = "0.8,0.1,0.1";
  std::size_t split_folds = 0;
  auto* split_cmd = app.add_subcommand("split", "Stratified train/validation/test split or k-fold CV");
  split_cmd->add_option("--input", split_manifest, "Labeled manifest TSV")->required();
  split_cmd->add_option("--ratios", ratios_text, "train,validation,test");
  split_cmd->add_option("--folds", split_folds, "k for stratified k-fold (0: single split)");
  split_cmd->add_option("--out-dir", out_dir)->required();
  common(split_cmd, Format::kTable);

  // synth
  std::size_t synth_classes = 3;
  std::size_t synth_docs = 50;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic graded corpus");
  synth_cmd->add_option("--classes", synth_classes)->check(CLI::Range(2, 100));
  synth_cmd->add_option("--docs-per-class", synth_docs)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out-dir", out_dir)->required();
  common(synth_cmd, Format::kTable);

  // eval-unsup
  std::vector<std::string> unsup_inputs;
  std::vector<std::string> unsup_measures;
  std::string unsup_lang = "en";
  std::string unsup_wordlist;
  auto* unsup_cmd = app.add_subcommand("eval-unsup", "Correlate measures with gold labels and rank them");
  unsup_cmd->add_option("--input", unsup_inputs, "Labeled manifest(s), one dataset each")->required();
  unsup_cmd->add_option("--model", model_path, "n-gram model for RSRS/PPL");
  unsup_cmd->add_option("--precomputed", precomputed_path, "JSONL token scores for RSRS/PPL");
  unsup_cmd->add_option("--measures", unsup_measures, "Measures (default: all available)");
  unsup_cmd->add_option("--lang", unsup_lang)->check(CLI::IsMember({"en", "sl"}));
  unsup_cmd->add_option("--wordlist", unsup_wordlist);
  unsup_cmd->add_option("--gfi-variant", gfi_variant)->check(CLI::IsMember({"paper", "standard"}));
  unsup_cmd->add_option("--out-dir", out_dir)->required();
  common(unsup_cmd, Format::kTable);

  // eval-sup
  readlab::SupervisedConfig sup;
  std::string sup_gold;
  std::string sup_predictions;
  std::string sup_lang = "en";
  std::string sup_wordlist;
  std::string qwk_weights = "linear-paper";
  std::string sup_ratios = "0.8,0.1,0.1";
  auto* sup_cmd = app.add_subcommand("eval-sup", "Classification metrics, confusion matrices and QWK");
  sup_cmd->add_option("--gold", sup_gold, "Gold labeled manifest")->required();
  sup_cmd->add_option("--predictions", sup_predictions, "TSV doc_id<TAB>predicted_class");
  sup_cmd->add_flag("--train-baseline", sup.train_baseline, "Train the logistic-regression baseline");
  sup_cmd->add_option("--folds", sup.folds, "k-fold CV for the baseline (0: single split)");
  sup_cmd->add_option("--ratios", sup_ratios, "train,validation,test for a single split");
  sup_cmd->add_option("--lr", sup.train.learning_rate)->check(CLI::PositiveNumber);
  sup_cmd->add_option("--epochs", sup.train.epochs);
  sup_cmd->add_flag("--rsrs", sup.include_rsrs, "Add the RSRS feature");
  sup_cmd->add_flag("--log-ppl", sup.include_log_perplexity, "Add the log-perplexity feature");
  sup_cmd->add_option("--model", model_path, "n-gram model for RSRS/perplexity features");
  sup_cmd->add_option("--precomputed", precomputed_path, "JSONL token scores for RSRS/perplexity");
  sup_cmd->add_option("--lang", sup_lang)->check(CLI::IsMember({"en", "sl"}));
  sup_cmd->add_option("--wordlist", sup_wordlist);
  sup_cmd->add_option("--gfi-variant", gfi_variant)->check(CLI::IsMember({"paper", "standard"}));
  sup_cmd->add_option("--qwk-weights", qwk_weights)->check(CLI::IsMember({"linear-paper", "quadratic"}));
  sup_cmd->add_option("--out-dir", out_dir)->required();
  common(sup_cmd, Format::kTable);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const bool format_given = std::any_of(format_options.begin(), format_options.end(),
                                        [](const CLI::Option* o) { return o->count() > 0; });
  if (!format_given && !out.empty()) {
    const auto ext = fs::path(out).extension().string();
    if (ext == ".csv") format = Format::kCsv;
    if (ext == ".json") format = Format::kJson;
  }

  auto provider_source = [&]() {
    readlab::ProviderSource source;
    if (!model_path.empty()) source.model = model_path;
    if (!precomputed_path.empty()) source.precomputed = precomputed_path;
    return source;
  };

  try {
    if (profile_cmd->parsed()) {
      const auto corpus = profile_in.load();
      const auto wordlist = profile_in.load_wordlist();
      const auto lang = readlab::parse_lang(profile_in.lang);
      const auto run = readlab::RunMetadata::make("profile", seed, profile_in.canonical());
      const std::vector<std::string> header{"doc_id", "words", "sentences", "syllables",
                                            "characters", "long_words", "polysyllables",
                                            "difficult_words"};
      std::vector<std::vector<std::string>> rows;
      nlohmann::ordered_json json_rows = nlohmann::ordered_json::array();
      for (const auto& doc : corpus.documents) {
        const auto p = readlab::profile(doc, &wordlist, lang);
        rows.push_back({doc.id, std::to_string(p.total_words), std::to_string(p.total_sentences),
                        std::to_string(p.total_syllables), std::to_string(p.total_characters),
                        std::to_string(p.long_words), std::to_string(p.polysyllables),
                        std::to_string(p.difficult_words)});
        json_rows.push_back({{"doc_id", doc.id},
                             {"total_words", p.total_words},
                             {"total_sentences", p.total_sentences},
                             {"total_syllables", p.total_syllables},
                             {"total_characters", p.total_characters},
                             {"long_words", p.long_words},
                             {"polysyllables", p.polysyllables},
                             {"difficult_words", p.difficult_words}});
      }
      emit(out, render_rows(format, run, header, rows, json_rows));
      return 0;
    }

    if (score_cmd->parsed()) {
      const auto corpus = score_in.load();
      const auto wordlist = score_in.load_wordlist();
      readlab::FormulaConfig config;
      config.lang = readlab::parse_lang(score_in.lang);
      config.gfi_variant = readlab::parse_gfi_variant(gfi_variant);
      config.wordlist = &wordlist;
      if (!score_measures.empty()) {
        config.measures.clear();
        for (const auto& name : score_measures) {
          const auto m = readlab::parse_measure(name);
          if (!m) throw Error(ErrorCode::kUsage, "unknown measure '" + name + "'");
          config.measures.push_back(*m);
        }
      }
      std::string canonical = score_in.canonical() + ";gfi=" + gfi_variant + ";measures=";
      for (auto m : config.measures) canonical += std::string(readlab::measure_name(m)) + ",";
      const auto run = readlab::RunMetadata::make("score", seed, canonical);
      std::vector<std::string> header{"doc_id"};
      for (auto m : config.measures) header.emplace_back(readlab::measure_name(m));
      std::vector<std::vector<std::string>> rows;
      nlohmann::ordered_json json_rows = nlohmann::ordered_json::array();
      bool degenerate = false;
      for (const auto& doc : corpus.documents) {
        const auto report = readlab::score_all(doc, config);
        degenerate = degenerate || report.has_errors();
        std::vector<std::string> row{doc.id};
        for (const auto& e : report.entries) {
          row.push_back(e.score ? readlab::format_number(*e.score) : "ERROR");
        }
        rows.push_back(std::move(row));
        json_rows.push_back(report.to_json());
      }
      emit(out, render_rows(format, run, header, rows, json_rows));
      if (degenerate) {
        std::cerr << "readlab: some documents have degenerate profiles (see ERROR markers)\n";
        return readlab::exit_code_for(ErrorCode::kDegenerateProfile);
      }
      return 0;
    }

    if (lm_cmd->parsed()) {
      const auto corpus = lm_in.load();
      readlab::NGramConfig config;
      config.order = order;
      config.smoothing = readlab::parse_smoothing(smoothing);
      config.k = k;
      config.min_count = min_count;
      const auto sentences = token_sentences(corpus);
      const auto model = readlab::NGramModel::train(sentences, config);
      std::ostringstream text;
      model.save(text);
      readlab::write_file_atomic(out, text.str());
      const auto run = readlab::RunMetadata::make(
          "train-lm", seed,
          lm_in.canonical() + ";order=" + std::to_string(order) + ";smoothing=" + smoothing +
              ";k=" + readlab::format_number(k) + ";min_count=" + std::to_string(min_count));
      std::cout << summary(format, run,
                           {{"model", out},
                            {"order", order},
                            {"smoothing", smoothing},
                            {"vocabulary", model.vocabulary_size()},
                            {"sentences", sentences.size()}});
      return 0;
    }

    if (rsrs_cmd->parsed()) {
      const auto source = provider_source();
      if (!source.configured()) throw Error(ErrorCode::kUsage, "rsrs needs --model or --precomputed");
      source.validate();
      const auto corpus = rsrs_in.load();
      const auto provider = source.open();
      const auto run = readlab::RunMetadata::make("rsrs", seed, rsrs_in.canonical() + ";" + source.canonical());
      std::vector<readlab::LanguageModelScores> scores(corpus.size());
      readlab::parallel_for(corpus.size(), [&](std::size_t i) {
        try {
          scores[i] = readlab::score_with_model(*provider, corpus.documents[i]);
        } catch (const Error& e) {
          throw Error(e.code(), "document '" + corpus.documents[i].id + "': " + e.what());
        }
      });
      std::vector<std::vector<std::string>> rows;
      nlohmann::ordered_json json_rows = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        rows.push_back({corpus.documents[i].id, readlab::format_number(scores[i].rsrs),
                        readlab::format_number(scores[i].perplexity)});
        json_rows.push_back({{"doc_id", corpus.documents[i].id},
                             {"rsrs", scores[i].rsrs},
                             {"perplexity", scores[i].perplexity}});
      }
      emit(out, render_rows(format, run, {"doc_id", "rsrs", "perplexity"}, rows, json_rows));
      return 0;
    }

    if (export_cmd->parsed()) {
      const auto corpus = export_in.load();
      const auto model = readlab::NGramModel::load(fs::path(model_path));
      std::string lines;
      for (const auto& doc : corpus.documents) lines += readlab::export_scores(model, doc).dump() + "\n";
      readlab::write_file_atomic(out, lines);
      const auto run = readlab::RunMetadata::make("export-scores", seed,
                                                  export_in.canonical() + ";model=" + model_path);
      std::cout << summary(format, run, {{"out", out}, {"documents", corpus.size()}});
      return 0;
    }

    if (chunk_cmd->parsed()) {
      const auto corpus = chunk_in.load();
      const auto run = readlab::RunMetadata::make(
          "chunk", seed,
          chunk_in.canonical() + ";n=" + std::to_string(chunk_n) + ";min_tail=" + std::to_string(min_tail));
      auto chunks = readlab::chunk_corpus(corpus, chunk_n, min_tail);
      const std::size_t n_chunks = chunks.size();
      write_corpus(std::move(chunks), out_dir, run);
      std::cout << summary(format, run,
                           {{"documents", corpus.size()},
                            {"chunks", n_chunks},
                            {"manifest", (fs::path(out_dir) / "manifest.tsv").string()}});
      return 0;
    }

    if (split_cmd->parsed()) {
      const auto corpus = readlab::load_manifest(split_manifest);
      const auto r = parse_ratios(ratios_text);
      readlab::SplitSpec spec{{r[0], r[1], r[2]}, seed};
      const auto run = readlab::RunMetadata::make(
          "split", seed, "input=" + split_manifest + ";ratios=" + ratios_text +
                             ";folds=" + std::to_string(split_folds));
      std::vector<readlab::Split> rounds;
      if (split_folds > 0) {
        rounds = readlab::stratified_kfold(corpus, split_folds, seed);
      } else {
        rounds.push_back(readlab::stratified_split(corpus, spec));
      }
      const fs::path dir(out_dir);
      nlohmann::ordered_json records = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < rounds.size(); ++i) {
        const fs::path round_dir = split_folds > 0 ? dir / ("fold" + std::to_string(i)) : dir;
        for (const auto& [name, part] :
             {std::pair{"train", &rounds[i].train}, std::pair{"validation", &rounds[i].validation},
              std::pair{"test", &rounds[i].test}}) {
          std::ostringstream manifest;
          manifest << run.comment_line() << '\n';
          readlab::write_manifest(corpus.subset(*part), manifest, round_dir);
          readlab::write_file_atomic(round_dir / (std::string(name) + ".tsv"), manifest.str());
        }
        records.push_back(readlab::split_record(corpus, rounds[i], spec));
      }
      nlohmann::ordered_json record{{"run", run.to_json()}};
      if (split_folds > 0) {
        record["folds"] = records;
      } else {
        record["split"] = records.front();
      }
      readlab::write_file_atomic(dir / "split.json", record.dump(2) + "\n");
      std::cout << summary(format, run, {{"documents", corpus.size()}, {"rounds", rounds.size()}});
      return 0;
    }

    if (synth_cmd->parsed()) {
      const auto run = readlab::RunMetadata::make(
          "synth", seed,
          "classes=" + std::to_string(synth_classes) + ";docs=" + std::to_string(synth_docs));
      auto corpus = readlab::generate_synthetic(synth_classes, synth_docs, seed);
      const std::size_t n = corpus.size();
      write_corpus(std::move(corpus), out_dir, run);
      std::cout << summary(format, run,
                           {{"documents", n},
                            {"manifest", (fs::path(out_dir) / "manifest.tsv").string()}});
      return 0;
    }

    if (unsup_cmd->parsed()) {
      readlab::UnsupervisedConfig config;
      for (const auto& m : unsup_inputs) config.manifests.emplace_back(m);
      config.provider = provider_source();
      config.measures = unsup_measures;
      config.lang = readlab::parse_lang(unsup_lang);
      if (!unsup_wordlist.empty()) config.wordlist = unsup_wordlist;
      config.gfi_variant = readlab::parse_gfi_variant(gfi_variant);
      config.seed = seed;
      config.out_dir = out_dir;
      const auto report = readlab::run_unsupervised_eval(config);
      if (format == Format::kJson) {
        std::cout << report.to_json().dump(2) << '\n';
      } else if (format == Format::kCsv) {
        std::cout << report.run.comment_line() << "\ndataset,measure,pearson\n";
        for (const auto& [dataset, values] : report.correlations) {
          for (const auto& [measure, rho] : values) {
            std::cout << dataset << ',' << measure << ',' << readlab::format_number(rho) << '\n';
          }
        }
      } else {
        std::cout << report.run.comment_line() << "\n\n"
                  << readlab::correlation_table_text(report.correlations, report.measures) << '\n'
                  << report.ranking.to_text();
      }
      for (const auto& note : report.notes) std::cerr << "note: " << note << '\n';
      return 0;
    }

    if (sup_cmd->parsed()) {
      sup.gold_manifest = sup_gold;
      if (!sup_predictions.empty()) sup.predictions = sup_predictions;
      const auto r = parse_ratios(sup_ratios);
      sup.ratios = {r[0], r[1], r[2]};
      sup.provider = provider_source();
      sup.lang = readlab::parse_lang(sup_lang);
      if (!sup_wordlist.empty()) sup.wordlist = sup_wordlist;
      sup.gfi_variant = readlab::parse_gfi_variant(gfi_variant);
      sup.weighting = readlab::parse_kappa_weighting(qwk_weights);
      sup.seed = seed;
      sup.out_dir = out_dir;
      const auto report = readlab::run_supervised_eval(sup);
      if (format == Format::kJson) {
        std::cout << report.to_json().dump(2) << '\n';
      } else {
        std::vector<std::vector<std::string>> cells{
            {"result", "n", "accuracy", "w-precision", "w-recall", "w-F1", "QWK"}};
        auto row = [](const std::string& name, std::uint64_t n, const readlab::ClassificationMetrics& m,
                      double q) {
          char buf[5][16];
          const double v[5] = {m.accuracy, m.weighted_precision, m.weighted_recall, m.weighted_f1, q};
          std::vector<std::string> out{name, n ? std::to_string(n) : "-"};
          for (int i = 0; i < 5; ++i) {
            std::snprintf(buf[i], sizeof buf[i], "%.4f", v[i]);
            out.emplace_back(buf[i]);
          }
          return out;
        };
        for (const auto& res : report.results) cells.push_back(row(res.name, res.matrix.total(), res.metrics, res.qwk));
        if (report.mean_metrics) cells.push_back(row("mean", 0, *report.mean_metrics, *report.mean_qwk));
        if (format == Format::kCsv) {
          std::cout << report.run.comment_line() << '\n';
          for (const auto& line : cells) {
            for (std::size_t i = 0; i < line.size(); ++i) std::cout << (i ? "," : "") << line[i];
            std::cout << '\n';
          }
        } else {
          std::cout << report.run.comment_line() << "\n" << readlab::RankingTable::render_columns(cells);
        }
      }
      for (const auto& note : report.notes) std::cerr << "note: " << note << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "readlab: " << e.what() << '\n';
    return readlab::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "readlab: internal error: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
