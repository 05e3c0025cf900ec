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

// The two experiment pipelines: correlating readability measures with gold
// labels (unsupervised) and scoring classifier predictions (supervised).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "readlab/baseline.hpp"
#include "readlab/corpus.hpp"
#include "readlab/error.hpp"
#include "readlab/formulas.hpp"
#include "readlab/io.hpp"
#include "readlab/langmodel.hpp"
#include "readlab/metrics.hpp"
#include "readlab/rsrs.hpp"
#include "readlab/textseg.hpp"

namespace readlab {

namespace fs = std::filesystem;

inline constexpr std::string_view kRsrsMeasure = "RSRS";
inline constexpr std::string_view kPerplexityMeasure = "PPL";

// Where token likelihoods come from: a trained n-gram model file or a JSONL
// file of precomputed scores.
struct ProviderSource {
  std::optional<fs::path> model;
  std::optional<fs::path> precomputed;

  bool configured() const { return model.has_value() || precomputed.has_value(); }

  void validate() const {
    if (model && precomputed) {
      throw Error(ErrorCode::kUsage, "give either a model or precomputed scores, not both");
    }
    if (model && !fs::exists(*model)) throw Error(ErrorCode::kMissingFile, "model not found: " + model->string());
    if (precomputed && !fs::exists(*precomputed)) {
      throw Error(ErrorCode::kMissingFile, "score file not found: " + precomputed->string());
    }
  }

  std::unique_ptr<LikelihoodProvider> open() const {
    if (model) return std::make_unique<NGramModel>(NGramModel::load(*model));
    if (precomputed) return std::make_unique<PrecomputedScores>(PrecomputedScores::load(*precomputed));
    return nullptr;
  }

  std::string canonical() const {
    return "model=" + (model ? model->generic_string() : "") +
           ";precomputed=" + (precomputed ? precomputed->generic_string() : "");
  }
};

struct UnsupervisedConfig {
  std::vector<fs::path> manifests;  // one dataset per manifest
  ProviderSource provider;
  // Measure names (GFI FRE FKGL ARI DCRF SMOG ASL RSRS PPL). Empty means the
  // seven formulas, plus RSRS and PPL when a provider is configured.
  std::vector<std::string> measures;
  LangProfile lang = LangProfile::kEnglish;
  std::optional<fs::path> wordlist;
  GfiVariant gfi_variant = GfiVariant::kPerSentence;
  std::uint64_t seed = 0;
  fs::path out_dir;

  std::string canonical() const {
    std::ostringstream s;
    s << "eval-unsup;manifests=";
    for (const auto& m : manifests) s << m.generic_string() << ',';
    s << ';' << provider.canonical() << ";measures=";
    for (const auto& m : measures) s << m << ',';
    s << ";lang=" << lang_name(lang) << ";wordlist=" << (wordlist ? wordlist->generic_string() : "")
      << ";gfi=" << (gfi_variant == GfiVariant::kPerSentence ? "paper" : "standard") << ";seed=" << seed;
    return s.str();
  }
};

struct DocumentScores {
  std::string doc_id;
  int label = 0;
  std::vector<std::optional<double>> values;  // aligned with the measure list
  std::vector<std::string> errors;
};

struct DatasetScores {
  std::string name;
  std::vector<DocumentScores> documents;
};

struct UnsupervisedReport {
  RunMetadata run;
  std::vector<std::string> measures;
  std::vector<DatasetScores> datasets;
  CorrelationTable correlations;
  RankingTable ranking;
  std::vector<std::string> notes;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json corr = nlohmann::ordered_json::object();
    for (const auto& [dataset, values] : correlations) {
      nlohmann::ordered_json row = nlohmann::ordered_json::object();
      for (const auto& m : measures) {
        const auto it = values.find(m);
        if (it != values.end()) row[m] = it->second;
      }
      corr[dataset] = row;
    }
    nlohmann::ordered_json direction = nlohmann::ordered_json::object();
    for (const auto& m : measures) direction[m] = direction_name(direction_of(m));
    return {{"run", run.to_json()},     {"measures", measures},
            {"direction", direction},   {"correlations", corr},
            {"ranking", ranking.to_json()}, {"notes", notes}};
  }
};

namespace detail {

inline std::vector<std::string> resolve_measures(std::vector<std::string> measures, bool have_provider) {
  if (measures.empty()) {
    for (Measure m : kTraditionalMeasures) measures.emplace_back(measure_name(m));
    if (have_provider) {
      measures.emplace_back(kRsrsMeasure);
      measures.emplace_back(kPerplexityMeasure);
    }
  }
  std::set<std::string> seen;
  for (const auto& m : measures) {
    if (!parse_measure(m) && m != kRsrsMeasure && m != kPerplexityMeasure) {
      throw Error(ErrorCode::kUsage, "unknown measure '" + m + "'");
    }
    if (!seen.insert(m).second) throw Error(ErrorCode::kUsage, "measure '" + m + "' listed twice");
  }
  return measures;
}

inline bool needs_language_model(const std::vector<std::string>& measures) {
  for (const auto& m : measures) {
    if (m == kRsrsMeasure || m == kPerplexityMeasure) return true;
  }
  return false;
}

inline std::vector<std::string> dataset_names(const std::vector<fs::path>& manifests) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (const auto& m : manifests) {
    std::string name = m.stem().string();
    if (m.has_parent_path() && m.parent_path().has_filename() && name == "manifest") {
      name = m.parent_path().filename().string();
    }
    std::string unique = name;
    for (int i = 2; !used.insert(unique).second; ++i) unique = name + "-" + std::to_string(i);
    names.push_back(unique);
  }
  return names;
}

}  // namespace detail

inline DocumentScores score_document_measures(const Document& doc, int label,
                                              const std::vector<std::string>& measures,
                                              const FormulaConfig& formulas,
                                              const LikelihoodProvider* provider) {
  DocumentScores row{doc.id, label, {}, {}};
  const StatProfile p = profile(doc, formulas.wordlist, formulas.lang);
  std::optional<LanguageModelScores> lm;
  std::string lm_error;
  if (provider != nullptr && detail::needs_language_model(measures)) {
    try {
      lm = score_with_model(*provider, doc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyDocument) {
        throw Error(e.code(), "document '" + doc.id + "': " + e.what());
      }
      lm_error = e.what();
    }
  }
  for (const auto& name : measures) {
    std::optional<double> value;
    std::string error;
    if (const auto m = parse_measure(name)) {
      try {
        value = evaluate(*m, p, formulas.gfi_variant);
      } catch (const Error& e) {
        error = e.what();
      }
    } else if (lm) {
      value = name == kRsrsMeasure ? lm->rsrs : lm->perplexity;
    } else {
      error = lm_error;
    }
    row.values.push_back(value);
    row.errors.push_back(error);
  }
  return row;
}

// Scores every document of every manifest, correlates each measure with the
// gold labels and ranks the measures. Writes scores.csv, correlations.json
// and ranking.txt into out_dir when it is non-empty.
inline UnsupervisedReport run_unsupervised_eval(const UnsupervisedConfig& config) {
  if (config.manifests.empty()) throw Error(ErrorCode::kUsage, "no input manifest given");
  for (const auto& m : config.manifests) {
    if (!fs::exists(m)) throw Error(ErrorCode::kMissingFile, "manifest not found: " + m.string());
  }
  if (config.wordlist && !fs::exists(*config.wordlist)) {
    throw Error(ErrorCode::kMissingFile, "word list not found: " + config.wordlist->string());
  }
  config.provider.validate();
  UnsupervisedReport report;
  report.measures = detail::resolve_measures(config.measures, config.provider.configured());
  if (detail::needs_language_model(report.measures) && !config.provider.configured()) {
    throw Error(ErrorCode::kUsage, "RSRS/PPL requested but no language model or score file given");
  }
  report.run = RunMetadata::make("eval-unsup", config.seed, config.canonical());

  const WordList wordlist = config.wordlist ? WordList::load(*config.wordlist) : WordList{};
  FormulaConfig formulas;
  formulas.gfi_variant = config.gfi_variant;
  formulas.lang = config.lang;
  formulas.wordlist = &wordlist;
  const auto provider = detail::needs_language_model(report.measures) ? config.provider.open() : nullptr;

  const auto names = detail::dataset_names(config.manifests);
  for (std::size_t d = 0; d < config.manifests.size(); ++d) {
    const LabeledCorpus corpus = load_manifest(config.manifests[d]);
    DatasetScores dataset{names[d], std::vector<DocumentScores>(corpus.size())};
    parallel_for(corpus.size(), [&](std::size_t i) {
      dataset.documents[i] = score_document_measures(corpus.documents[i], corpus.labels[i],
                                                     report.measures, formulas, provider.get());
    });
    auto& correlations = report.correlations[dataset.name];
    for (std::size_t m = 0; m < report.measures.size(); ++m) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& row : dataset.documents) {
        if (!row.values[m]) continue;
        xs.push_back(*row.values[m]);
        ys.push_back(static_cast<double>(row.label));
      }
      const std::size_t skipped = dataset.documents.size() - xs.size();
      if (skipped > 0) {
        report.notes.push_back(dataset.name + ": " + report.measures[m] + " undefined for " +
                               std::to_string(skipped) + " document(s)");
      }
      try {
        correlations[report.measures[m]] = pearson(xs, ys);
      } catch (const Error& e) {
        report.notes.push_back(dataset.name + ": no correlation for " + report.measures[m] + " (" +
                               e.what() + ")");
      }
    }
    report.datasets.push_back(std::move(dataset));
  }
  report.ranking = rank_measures(report.correlations);

  if (!config.out_dir.empty()) {
    std::ostringstream csv;
    csv << report.run.comment_line() << '\n' << "dataset,doc_id,label";
    for (const auto& m : report.measures) csv << ',' << m;
    csv << '\n';
    for (const auto& dataset : report.datasets) {
      for (const auto& row : dataset.documents) {
        csv << dataset.name << ',' << row.doc_id << ',' << row.label;
        for (const auto& v : row.values) csv << ',' << (v ? format_number(*v) : "ERROR");
        csv << '\n';
      }
    }
    write_file_atomic(config.out_dir / "scores.csv", csv.str());
    write_file_atomic(config.out_dir / "correlations.json", report.to_json().dump(2) + "\n");
    std::string text = report.run.comment_line() + "\n\nPearson correlation with gold labels\n\n" +
                       correlation_table_text(report.correlations, report.measures) +
                       "\nRanking (lower is better)\n\n" + report.ranking.to_text();
    write_file_atomic(config.out_dir / "ranking.txt", text);
  }
  return report;
}

struct SupervisedConfig {
  fs::path gold_manifest;
  // Mode (a): external predictions, TSV doc_id<TAB>predicted_class.
  std::optional<fs::path> predictions;
  // Mode (b): train the logistic-regression baseline.
  bool train_baseline = false;
  std::size_t folds = 0;  // 0: one stratified split, otherwise k-fold CV
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
  TrainConfig train;
  bool include_rsrs = false;
  bool include_log_perplexity = false;
  ProviderSource provider;
  LangProfile lang = LangProfile::kEnglish;
  std::optional<fs::path> wordlist;
  GfiVariant gfi_variant = GfiVariant::kPerSentence;
  KappaWeighting weighting = KappaWeighting::kLinear;
  std::uint64_t seed = 0;
  fs::path out_dir;

  std::string canonical() const {
    std::ostringstream s;
    s << "eval-sup;gold=" << gold_manifest.generic_string()
      << ";predictions=" << (predictions ? predictions->generic_string() : "")
      << ";baseline=" << train_baseline << ";folds=" << folds << ";ratios=" << ratios[0] << ','
      << ratios[1] << ',' << ratios[2] << ";lr=" << train.learning_rate << ";epochs=" << train.epochs
      << ";rsrs=" << include_rsrs << ";logppl=" << include_log_perplexity << ';'
      << provider.canonical() << ";lang=" << lang_name(lang)
      << ";wordlist=" << (wordlist ? wordlist->generic_string() : "")
      << ";gfi=" << (gfi_variant == GfiVariant::kPerSentence ? "paper" : "standard")
      << ";qwk=" << kappa_weighting_name(weighting) << ";seed=" << seed;
    return s.str();
  }
};

struct EvaluationResult {
  std::string name;
  ConfusionMatrix matrix{2};
  ClassificationMetrics metrics;
  double qwk = 0.0;

  nlohmann::ordered_json to_json() const {
    return {{"name", name},
            {"n", matrix.total()},
            {"accuracy", metrics.accuracy},
            {"weighted_precision", metrics.weighted_precision},
            {"weighted_recall", metrics.weighted_recall},
            {"weighted_f1", metrics.weighted_f1},
            {"qwk", qwk},
            {"confusion", matrix.to_json()}};
  }
};

inline EvaluationResult evaluate_predictions(std::string name, std::span<const int> truth,
                                             std::span<const int> predicted, std::size_t n_classes,
                                             KappaWeighting weighting) {
  EvaluationResult r{std::move(name), confusion(truth, predicted, n_classes), {}, 0.0};
  r.metrics = classification_metrics(r.matrix);
  r.qwk = qwk(r.matrix, weighting);
  return r;
}

struct SupervisedReport {
  RunMetadata run;
  std::string mode;
  KappaWeighting weighting = KappaWeighting::kLinear;
  std::vector<std::string> class_names;
  std::vector<EvaluationResult> results;  // test results: one, or one per fold
  std::optional<ClassificationMetrics> mean_metrics;
  std::optional<double> mean_qwk;
  std::vector<std::string> notes;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out = {{"run", run.to_json()},
                                  {"mode", mode},
                                  {"qwk_weighting", kappa_weighting_name(weighting)},
                                  {"classes", class_names}};
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& r : results) list.push_back(r.to_json());
    out["results"] = list;
    if (mean_metrics) {
      out["mean"] = {{"accuracy", mean_metrics->accuracy},
                     {"weighted_precision", mean_metrics->weighted_precision},
                     {"weighted_recall", mean_metrics->weighted_recall},
                     {"weighted_f1", mean_metrics->weighted_f1},
                     {"qwk", *mean_qwk}};
    }
    out["notes"] = notes;
    return out;
  }
};

// Prediction TSV: `doc_id<TAB>predicted_class`, optional header row with
// those names, '#' comment lines. predicted_class is a class index or name.
inline std::vector<std::pair<std::string, int>> load_predictions(
    const fs::path& path, const std::vector<std::string>& class_names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open predictions " + path.string());
  std::vector<std::pair<std::string, int>> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line == "doc_id\tpredicted_class") continue;
    const auto tab = line.find('\t');
    auto bad = [&](const std::string& what) {
      return Error(ErrorCode::kBadRow, path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw bad("expected doc_id<TAB>predicted_class");
    }
    const std::string id = line.substr(0, tab);
    const std::string cls = line.substr(tab + 1);
    int label = -1;
    const auto named = std::find(class_names.begin(), class_names.end(), cls);
    if (named != class_names.end()) {
      label = static_cast<int>(named - class_names.begin());
    } else {
      try {
        std::size_t used = 0;
        label = std::stoi(cls, &used);
        if (used != cls.size()) throw std::invalid_argument(cls);
      } catch (const std::exception&) {
        throw bad("unknown class '" + cls + "'");
      }
    }
    if (!seen.insert(id).second) throw bad("duplicate prediction for '" + id + "'");
    out.emplace_back(id, label);
  }
  return out;
}

// Features for every document, computed in parallel, stored in corpus order.
inline std::vector<std::vector<double>> featurize_corpus(const LabeledCorpus& corpus,
                                                         const FeatureConfig& config,
                                                         const LikelihoodProvider* provider) {
  std::vector<std::vector<double>> features(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    features[i] = featurize(corpus.documents[i], config, provider).values;
  });
  return features;
}

inline SupervisedReport run_supervised_eval(const SupervisedConfig& config) {
  if (!fs::exists(config.gold_manifest)) {
    throw Error(ErrorCode::kMissingFile, "manifest not found: " + config.gold_manifest.string());
  }
  if (config.predictions.has_value() == config.train_baseline) {
    throw Error(ErrorCode::kUsage, "give exactly one of a prediction file or --train-baseline");
  }
  if (config.predictions && !fs::exists(*config.predictions)) {
    throw Error(ErrorCode::kMissingFile, "predictions not found: " + config.predictions->string());
  }
  if (config.wordlist && !fs::exists(*config.wordlist)) {
    throw Error(ErrorCode::kMissingFile, "word list not found: " + config.wordlist->string());
  }
  config.provider.validate();
  if ((config.include_rsrs || config.include_log_perplexity) && !config.provider.configured()) {
    throw Error(ErrorCode::kUsage, "RSRS/perplexity features need a language model or score file");
  }

  SupervisedReport report;
  report.run = RunMetadata::make("eval-sup", config.seed, config.canonical());
  report.weighting = config.weighting;
  const LabeledCorpus corpus = load_manifest(config.gold_manifest);
  report.class_names = corpus.class_names;
  const std::size_t n_classes = corpus.n_classes();
  if (n_classes < 2) throw Error(ErrorCode::kSingleClass, "gold manifest has fewer than two classes");
  std::vector<std::pair<std::string, std::string>> extra_files;  // name, content

  if (config.predictions) {
    report.mode = "predictions";
    std::unordered_map<std::string, int> gold;
    for (std::size_t i = 0; i < corpus.size(); ++i) gold.emplace(corpus.documents[i].id, corpus.labels[i]);
    std::vector<int> truth;
    std::vector<int> predicted;
    for (const auto& [id, label] : load_predictions(*config.predictions, corpus.class_names)) {
      const auto it = gold.find(id);
      if (it == gold.end()) throw Error(ErrorCode::kUnknownDocId, "prediction for unknown document '" + id + "'");
      truth.push_back(it->second);
      predicted.push_back(label);
    }
    if (truth.size() < corpus.size()) {
      report.notes.push_back(std::to_string(corpus.size() - truth.size()) +
                             " gold document(s) have no prediction and were not evaluated");
    }
    report.results.push_back(evaluate_predictions("predictions", truth, predicted, n_classes, config.weighting));
  } else {
    FeatureConfig features_config;
    features_config.include_rsrs = config.include_rsrs;
    features_config.include_log_perplexity = config.include_log_perplexity;
    features_config.gfi_variant = config.gfi_variant;
    features_config.lang = config.lang;
    const WordList wordlist = config.wordlist ? WordList::load(*config.wordlist) : WordList{};
    features_config.wordlist = &wordlist;
    const auto provider = features_config.needs_provider() ? config.provider.open() : nullptr;
    const auto features = featurize_corpus(corpus, features_config, provider.get());
    const auto names = feature_names(features_config);

    std::vector<Split> rounds;
    if (config.folds > 0) {
      report.mode = "baseline-cv";
      rounds = stratified_kfold(corpus, config.folds, config.seed);
    } else {
      report.mode = "baseline-split";
      rounds.push_back(stratified_split(corpus, SplitSpec{config.ratios, config.seed}));
    }
    TrainConfig train = config.train;
    train.seed = config.seed;
    for (std::size_t r = 0; r < rounds.size(); ++r) {
      const auto& split = rounds[r];
      std::vector<std::vector<double>> x;
      std::vector<int> y;
      for (std::size_t i : split.train) {
        x.push_back(features[i]);
        y.push_back(corpus.labels[i]);
      }
      std::vector<std::string> warnings;
      const LogRegModel model = train_logreg(x, y, n_classes, train, names, &warnings);
      for (const auto& w : warnings) report.notes.push_back("round " + std::to_string(r) + ": " + w);
      std::vector<int> truth;
      std::vector<int> predicted;
      for (std::size_t i : split.test) {
        truth.push_back(corpus.labels[i]);
        predicted.push_back(predict(model, features[i]).label);
      }
      const std::string name = config.folds > 0 ? "fold" + std::to_string(r) : "test";
      report.results.push_back(evaluate_predictions(name, truth, predicted, n_classes, config.weighting));
      if (config.folds == 0) extra_files.emplace_back("baseline_model.json", model.to_json().dump(2) + "\n");
    }
    if (config.folds > 0) {
      ClassificationMetrics mean;
      double mean_qwk = 0.0;
      for (const auto& r : report.results) {
        mean.accuracy += r.metrics.accuracy;
        mean.weighted_precision += r.metrics.weighted_precision;
        mean.weighted_recall += r.metrics.weighted_recall;
        mean.weighted_f1 += r.metrics.weighted_f1;
        mean_qwk += r.qwk;
      }
      const auto k = static_cast<double>(report.results.size());
      mean.accuracy /= k;
      mean.weighted_precision /= k;
      mean.weighted_recall /= k;
      mean.weighted_f1 /= k;
      report.mean_metrics = mean;
      report.mean_qwk = mean_qwk / k;
    }
  }

  if (!config.out_dir.empty()) {
    write_file_atomic(config.out_dir / "metrics.json", report.to_json().dump(2) + "\n");
    for (const auto& r : report.results) {
      std::ostringstream csv;
      csv << report.run.comment_line() << '\n';
      r.matrix.write_csv(csv, report.class_names);
      const std::string file = report.results.size() == 1 ? "confusion.csv" : "confusion_" + r.name + ".csv";
      write_file_atomic(config.out_dir / file, csv.str());
    }
    for (const auto& [name, content] : extra_files) write_file_atomic(config.out_dir / name, content);
  }
  return report;
}

}  // namespace readlab
