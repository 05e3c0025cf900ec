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
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "readlab/error.hpp"
#include "readlab/formulas.hpp"
#include "readlab/langmodel.hpp"
#include "readlab/rsrs.hpp"
#include "readlab/textseg.hpp"

namespace readlab {

struct FeatureConfig {
  bool include_rsrs = false;
  bool include_log_perplexity = false;
  GfiVariant gfi_variant = GfiVariant::kPerSentence;
  LangProfile lang = LangProfile::kEnglish;
  const WordList* wordlist = nullptr;

  bool needs_provider() const { return include_rsrs || include_log_perplexity; }
};

// Order: GFI, FRE, FKGL, ARI, DCRF, SMOG, ASL, then RSRS and log-PPL when
// enabled.
inline std::vector<std::string> feature_names(const FeatureConfig& config) {
  std::vector<std::string> names;
  for (Measure m : kTraditionalMeasures) names.emplace_back(measure_name(m));
  if (config.include_rsrs) names.emplace_back("RSRS");
  if (config.include_log_perplexity) names.emplace_back("logPPL");
  return names;
}

struct FeatureVector {
  std::vector<double> values;
  bool standardized = false;
};

inline FeatureVector featurize(const Document& doc, const FeatureConfig& config,
                               const LikelihoodProvider* provider = nullptr) {
  if (config.needs_provider() && provider == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "RSRS/perplexity features need a likelihood provider");
  }
  const StatProfile p = profile(doc, config.wordlist, config.lang);
  FeatureVector out;
  try {
    for (Measure m : kTraditionalMeasures) out.values.push_back(evaluate(m, p, config.gfi_variant));
  } catch (const Error& e) {
    throw Error(e.code(), "document '" + doc.id + "': " + e.what());
  }
  if (config.needs_provider()) {
    const auto lm = score_with_model(*provider, doc);
    if (config.include_rsrs) out.values.push_back(lm.rsrs);
    if (config.include_log_perplexity) out.values.push_back(std::log(lm.perplexity));
  }
  return out;
}

// Multinomial logistic regression on standardized features. Weights are a
// C x (F+1) row-major grid whose last column is the bias.
struct LogRegModel {
  static constexpr std::string_view kFormat = "readlab-logreg v1";

  std::size_t n_classes = 0;
  std::vector<std::string> feature_names;  // full input layout
  std::vector<std::size_t> kept;           // input columns used by the model
  std::vector<double> means;               // train statistics, per kept column
  std::vector<double> stds;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::vector<double> loss_history;  // mean cross-entropy before each epoch, then final

  std::size_t n_inputs() const { return feature_names.size(); }
  std::size_t width() const { return kept.size() + 1; }

  // Standardized copy of a raw input vector, restricted to kept columns.
  std::vector<double> standardize(std::span<const double> raw) const {
    if (raw.size() != n_inputs()) {
      throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(n_inputs()) +
                                                     " features, got " +
                                                     std::to_string(raw.size()));
    }
    std::vector<double> z(kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) z[j] = (raw[kept[j]] - means[j]) / stds[j];
    return z;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json grid = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < n_classes; ++c) {
      grid.push_back(std::vector<double>(weights.begin() + static_cast<std::ptrdiff_t>(c * width()),
                                         weights.begin() + static_cast<std::ptrdiff_t>((c + 1) * width())));
    }
    return {{"format", kFormat}, {"classes", n_classes}, {"features", feature_names},
            {"kept", kept},      {"means", means},       {"stds", stds},
            {"weights", grid},   {"seed", seed}};
  }

  static LogRegModel from_json(const nlohmann::json& j) {
    LogRegModel m;
    try {
      if (j.at("format").get<std::string>() != kFormat) {
        throw Error(ErrorCode::kVersionMismatch, "unsupported model format");
      }
      m.n_classes = j.at("classes").get<std::size_t>();
      m.feature_names = j.at("features").get<std::vector<std::string>>();
      m.kept = j.at("kept").get<std::vector<std::size_t>>();
      m.means = j.at("means").get<std::vector<double>>();
      m.stds = j.at("stds").get<std::vector<double>>();
      m.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& row : j.at("weights")) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != m.kept.size() + 1) {
          throw Error(ErrorCode::kSchemaError, "weight row width does not match kept features");
        }
        m.weights.insert(m.weights.end(), values.begin(), values.end());
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaError, std::string("logistic model: ") + e.what());
    }
    if (m.weights.size() != m.n_classes * m.width() || m.means.size() != m.kept.size() ||
        m.stds.size() != m.kept.size()) {
      throw Error(ErrorCode::kSchemaError, "logistic model: inconsistent dimensions");
    }
    for (std::size_t k : m.kept) {
      if (k >= m.feature_names.size()) throw Error(ErrorCode::kSchemaError, "kept index out of range");
    }
    return m;
  }
};

namespace detail {

// Fills `probs` and returns log(probs[target]) without underflow clamping.
inline double softmax_row(std::span<const double> weights, std::span<const double> z,
                          std::size_t n_classes, std::vector<double>& probs,
                          std::size_t target = 0) {
  const std::size_t width = z.size() + 1;
  probs.assign(n_classes, 0.0);
  double max_logit = -INFINITY;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const double* w = weights.data() + c * width;
    double logit = w[z.size()];
    for (std::size_t j = 0; j < z.size(); ++j) logit += w[j] * z[j];
    probs[c] = logit;
    max_logit = std::max(max_logit, logit);
  }
  const double shifted_target = probs[target] - max_logit;
  double sum = 0.0;
  for (auto& p : probs) {
    p = std::exp(p - max_logit);
    sum += p;
  }
  for (auto& p : probs) p /= sum;
  return shifted_target - std::log(sum);
}

}  // namespace detail

// Mean cross-entropy of softmax(W [z, 1]) over the samples. When `gradient`
// is given it receives dLoss/dW in the same layout as `weights`.
inline double softmax_cross_entropy(std::span<const double> weights,
                                    const std::vector<std::vector<double>>& z,
                                    std::span<const int> labels, std::size_t n_classes,
                                    std::vector<double>* gradient = nullptr) {
  const std::size_t width = z.empty() ? 1 : z.front().size() + 1;
  if (gradient) gradient->assign(weights.size(), 0.0);
  std::vector<double> probs;
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    loss -= detail::softmax_row(weights, z[i], n_classes, probs, y);
    if (gradient) {
      for (std::size_t c = 0; c < n_classes; ++c) {
        const double delta = probs[c] - (c == y ? 1.0 : 0.0);
        double* g = gradient->data() + c * width;
        for (std::size_t j = 0; j + 1 < width; ++j) g[j] += delta * z[i][j];
        g[width - 1] += delta;
      }
    }
  }
  const auto n = static_cast<double>(z.size());
  if (gradient) {
    for (auto& g : *gradient) g /= n;
  }
  return loss / n;
}

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
};

// Full-batch gradient descent from zero weights. Columns with zero variance
// on the training data are dropped (reported through `warnings`).
inline LogRegModel train_logreg(const std::vector<std::vector<double>>& features,
                                std::span<const int> labels, std::size_t n_classes,
                                const TrainConfig& config,
                                std::vector<std::string> names = {},
                                std::vector<std::string>* warnings = nullptr) {
  if (features.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "features and labels differ in length");
  }
  if (features.empty()) throw Error(ErrorCode::kEmptyInput, "no training samples");
  const std::size_t n_inputs = features.front().size();
  if (names.empty()) {
    for (std::size_t j = 0; j < n_inputs; ++j) names.push_back("f" + std::to_string(j));
  }
  if (names.size() != n_inputs) throw Error(ErrorCode::kDimensionMismatch, "feature name count");
  std::vector<bool> present(n_classes, false);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes) {
      throw Error(ErrorCode::kLabelOutOfRange, "label " + std::to_string(y));
    }
    present[static_cast<std::size_t>(y)] = true;
  }
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw Error(ErrorCode::kSingleClass, "training labels contain fewer than two classes");
  }

  LogRegModel model;
  model.n_classes = n_classes;
  model.feature_names = std::move(names);
  model.seed = config.seed;
  const auto n = static_cast<double>(features.size());
  for (std::size_t j = 0; j < n_inputs; ++j) {
    double mean = 0.0;
    for (const auto& row : features) {
      if (row.size() != n_inputs) throw Error(ErrorCode::kDimensionMismatch, "ragged feature rows");
      mean += row[j];
    }
    mean /= n;
    double var = 0.0;
    for (const auto& row : features) var += (row[j] - mean) * (row[j] - mean);
    const double sd = std::sqrt(var / n);
    if (!(sd > 1e-12)) {
      if (warnings) warnings->push_back("dropping zero-variance feature " + model.feature_names[j]);
      continue;
    }
    model.kept.push_back(j);
    model.means.push_back(mean);
    model.stds.push_back(sd);
  }

  std::vector<std::vector<double>> z;
  z.reserve(features.size());
  for (const auto& row : features) z.push_back(model.standardize(row));

  model.weights.assign(n_classes * model.width(), 0.0);
  std::vector<double> gradient;
  for (std::size_t epoch = 0; epoch <= config.epochs; ++epoch) {
    const double loss =
        softmax_cross_entropy(model.weights, z, labels, n_classes,
                              epoch < config.epochs ? &gradient : nullptr);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kNonFiniteLoss, "loss became non-finite at epoch " + std::to_string(epoch));
    }
    model.loss_history.push_back(loss);
    if (epoch == config.epochs) break;
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      model.weights[i] -= config.learning_rate * gradient[i];
    }
  }
  return model;
}

struct Prediction {
  int label = 0;
  std::vector<double> probabilities;
};

inline Prediction predict(const LogRegModel& model, std::span<const double> features) {
  const auto z = model.standardize(features);
  Prediction out;
  detail::softmax_row(model.weights, z, model.n_classes, out.probabilities);
  out.label = static_cast<int>(std::max_element(out.probabilities.begin(), out.probabilities.end()) -
                               out.probabilities.begin());
  return out;
}

inline void save_logreg(const LogRegModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << model.to_json().dump(2) << '\n';
}

inline LogRegModel load_logreg(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  try {
    return LogRegModel::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, path.string() + ": " + e.what());
  }
}

}  // namespace readlab
