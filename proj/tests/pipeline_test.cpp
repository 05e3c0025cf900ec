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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "readlab/readlab.hpp"

using namespace readlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("readlab_pipeline_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_corpus(LabeledCorpus corpus, const fs::path& dir) {
  write_documents(corpus, dir / "docs");
  std::ostringstream text;
  write_manifest(corpus, text, dir);
  std::ofstream(dir / "manifest.tsv") << text.str();
  return dir / "manifest.tsv";
}

fs::path train_model(const LabeledCorpus& source, const fs::path& path) {
  std::vector<std::vector<std::string>> sentences;
  for (const auto& doc : source.documents) {
    for (const auto& s : doc.sentences) sentences.push_back(s.tokens);
  }
  NGramModel::train(sentences, NGramConfig{}).save(path);
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST(Unsupervised, SyntheticCorpusSigns) {
  const auto dir = fresh_dir("signs");
  const auto manifest = write_corpus(generate_synthetic(3, 30, 0), dir / "graded");
  const auto held_out = generate_synthetic(3, 20, 1000).subset(std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  UnsupervisedConfig config;
  config.manifests = {manifest};
  config.provider.model = train_model(held_out, dir / "ref.lm");
  config.out_dir = dir / "out";
  const auto report = run_unsupervised_eval(config);
  ASSERT_EQ(report.correlations.size(), 1u);
  const auto& rho = report.correlations.at("graded");
  for (const auto& m : {"GFI", "FKGL", "ARI", "SMOG", "ASL", "DCRF", "RSRS"}) EXPECT_GT(rho.at(m), 0.0) << m;
  EXPECT_LT(rho.at("FRE"), 0.0);
  EXPECT_TRUE(fs::exists(dir / "out/scores.csv"));
  EXPECT_TRUE(fs::exists(dir / "out/correlations.json"));
  EXPECT_TRUE(fs::exists(dir / "out/ranking.txt"));
  const auto first_line = slurp(dir / "out/scores.csv").substr(0, 10);
  EXPECT_EQ(first_line, "# readlab ");
}

TEST(Unsupervised, SingleMeasureRanking) {
  const auto dir = fresh_dir("single");
  const auto manifest = write_corpus(generate_synthetic(2, 6, 0), dir / "d");
  UnsupervisedConfig config;
  config.manifests = {manifest};
  config.measures = {"ASL"};
  const auto report = run_unsupervised_eval(config);
  ASSERT_EQ(report.ranking.rows.size(), 1u);
  EXPECT_EQ(report.ranking.rows[0].measure, "ASL");
}

TEST(Unsupervised, LanguageModelMeasureWithoutModelFailsEarly) {
  const auto dir = fresh_dir("nomodel");
  const auto manifest = write_corpus(generate_synthetic(2, 4, 0), dir / "d");
  UnsupervisedConfig config;
  config.manifests = {manifest};
  config.measures = {"ASL", "RSRS"};
  config.out_dir = dir / "out";
  EXPECT_EQ(code_of([&] { run_unsupervised_eval(config); }), ErrorCode::kUsage);
  EXPECT_FALSE(fs::exists(dir / "out"));

  config.provider.model = dir / "missing.lm";
  EXPECT_EQ(code_of([&] { run_unsupervised_eval(config); }), ErrorCode::kMissingFile);
  config.provider.precomputed = dir / "missing.jsonl";
  EXPECT_EQ(code_of([&] { run_unsupervised_eval(config); }), ErrorCode::kUsage);
}

TEST(Unsupervised, UnknownMeasureIsUsageError) {
  const auto dir = fresh_dir("unknown");
  UnsupervisedConfig config;
  config.manifests = {write_corpus(generate_synthetic(2, 3, 0), dir / "d")};
  config.measures = {"NOPE"};
  EXPECT_EQ(code_of([&] { run_unsupervised_eval(config); }), ErrorCode::kUsage);
}

TEST(Unsupervised, MultipleDatasetsAndDeterminism) {
  const auto dir = fresh_dir("multi");
  UnsupervisedConfig config;
  config.manifests = {write_corpus(generate_synthetic(3, 8, 0), dir / "first"),
                      write_corpus(generate_synthetic(2, 8, 1), dir / "second")};
  config.out_dir = dir / "run1";
  const auto a = run_unsupervised_eval(config);
  EXPECT_EQ(a.ranking.datasets, (std::vector<std::string>{"first", "second"}));
  config.out_dir = dir / "run2";
  const auto b = run_unsupervised_eval(config);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  for (const auto* f : {"scores.csv", "correlations.json", "ranking.txt"}) {
    EXPECT_EQ(slurp(dir / "run1" / f), slurp(dir / "run2" / f)) << f;
  }
}

TEST(Supervised, PredictionFileHandCase) {
  const auto dir = fresh_dir("handcase");
  LabeledCorpus corpus;
  corpus.class_names = {"easy", "hard"};
  for (int i = 0; i < 4; ++i) {
    corpus.documents.push_back(make_document("doc" + std::to_string(i), "Some text."));
    corpus.labels.push_back(i < 2 ? 0 : 1);
  }
  SupervisedConfig config;
  config.gold_manifest = write_corpus(corpus, dir);
  std::ofstream(dir / "pred.tsv") << "doc_id\tpredicted_class\n"
                                  << "docs/doc0\t0\ndocs/doc1\thard\ndocs/doc2\t1\ndocs/doc3\t1\n";
  config.predictions = dir / "pred.tsv";
  config.out_dir = dir / "out";
  const auto report = run_supervised_eval(config);
  ASSERT_EQ(report.results.size(), 1u);
  EXPECT_NEAR(report.results[0].metrics.accuracy, 0.75, 1e-12);
  EXPECT_NEAR(report.results[0].metrics.weighted_f1, 0.7333, 1e-4);
  EXPECT_NEAR(report.results[0].qwk, 0.5, 1e-12);
  EXPECT_TRUE(fs::exists(dir / "out/metrics.json"));
  EXPECT_TRUE(fs::exists(dir / "out/confusion.csv"));

  std::ofstream(dir / "perfect.tsv") << "docs/doc0\t0\ndocs/doc1\t0\ndocs/doc2\t1\ndocs/doc3\t1\n";
  config.predictions = dir / "perfect.tsv";
  const auto perfect = run_supervised_eval(config);
  EXPECT_DOUBLE_EQ(perfect.results[0].metrics.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(perfect.results[0].qwk, 1.0);

  std::ofstream(dir / "unknown.tsv") << "docs/doc0\t0\ndocs/other\t1\n";
  config.predictions = dir / "unknown.tsv";
  EXPECT_EQ(code_of([&] { run_supervised_eval(config); }), ErrorCode::kUnknownDocId);

  std::ofstream(dir / "dup.tsv") << "docs/doc0\t0\ndocs/doc0\t1\n";
  config.predictions = dir / "dup.tsv";
  EXPECT_EQ(code_of([&] { run_supervised_eval(config); }), ErrorCode::kBadRow);
}

TEST(Supervised, ModeMustBeExactlyOne) {
  const auto dir = fresh_dir("mode");
  SupervisedConfig config;
  config.gold_manifest = write_corpus(generate_synthetic(2, 5, 0), dir);
  EXPECT_EQ(code_of([&] { run_supervised_eval(config); }), ErrorCode::kUsage);
}

TEST(Supervised, BaselineCrossValidation) {
  const auto dir = fresh_dir("cv");
  SupervisedConfig config;
  config.gold_manifest = write_corpus(generate_synthetic(3, 20, 0), dir / "data");
  config.train_baseline = true;
  config.folds = 5;
  config.out_dir = dir / "run1";
  const auto a = run_supervised_eval(config);
  ASSERT_EQ(a.results.size(), 5u);
  ASSERT_TRUE(a.mean_metrics.has_value());
  EXPECT_GT(a.mean_metrics->accuracy, 0.6);
  for (int f = 0; f < 5; ++f) EXPECT_TRUE(fs::exists(dir / "run1" / ("confusion_fold" + std::to_string(f) + ".csv")));
  config.out_dir = dir / "run2";
  run_supervised_eval(config);
  EXPECT_EQ(slurp(dir / "run1/metrics.json"), slurp(dir / "run2/metrics.json"));
}

TEST(Supervised, BaselineSingleSplitWritesModel) {
  const auto dir = fresh_dir("split");
  SupervisedConfig config;
  config.gold_manifest = write_corpus(generate_synthetic(3, 20, 0), dir / "data");
  config.train_baseline = true;
  config.out_dir = dir / "out";
  const auto report = run_supervised_eval(config);
  ASSERT_EQ(report.results.size(), 1u);
  EXPECT_EQ(report.results[0].matrix.total(), 6u);
  const auto model = load_logreg(dir / "out/baseline_model.json");
  EXPECT_EQ(model.feature_names.size(), 7u);
}

TEST(Supervised, LanguageModelFeatures) {
  const auto dir = fresh_dir("lmfeatures");
  const auto corpus = generate_synthetic(3, 10, 0);
  SupervisedConfig config;
  config.gold_manifest = write_corpus(corpus, dir / "data");
  config.train_baseline = true;
  config.folds = 3;
  config.include_rsrs = true;
  config.include_log_perplexity = true;
  EXPECT_EQ(code_of([&] { run_supervised_eval(config); }), ErrorCode::kUsage);
  config.provider.model = train_model(generate_synthetic(2, 5, 77), dir / "ref.lm");
  const auto report = run_supervised_eval(config);
  EXPECT_EQ(report.results.size(), 3u);
}

TEST(ParallelFor, LowestIndexErrorWins) {
  try {
    parallel_for(100, [](std::size_t i) {
      if (i % 7 == 3) throw Error(ErrorCode::kBadRow, std::to_string(i));
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(": 3"), std::string::npos) << e.what();
  }
}

TEST(RunMetadata, HashIgnoresOutputLocation) {
  UnsupervisedConfig a, b;
  a.manifests = b.manifests = {"x/manifest.tsv"};
  a.out_dir = "one";
  b.out_dir = "two";
  EXPECT_EQ(a.canonical(), b.canonical());
  b.seed = 1;
  EXPECT_NE(a.canonical(), b.canonical());
}

TEST(AtomicWrite, NoTemporaryLeftBehind) {
  const auto dir = fresh_dir("atomic");
  write_file_atomic(dir / "sub/out.txt", "hello");
  EXPECT_EQ(slurp(dir / "sub/out.txt"), "hello");
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir / "sub")) {
    (void)entry;
    ++files;
  }
  EXPECT_EQ(files, 1u);
}
