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
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "readlab/error.hpp"
#include "readlab/formulas.hpp"

namespace readlab {

// Pearson correlation from sums of centered products, so the population vs
// sample normalization cancels.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kLengthMismatch, "pearson: series lengths " +
                                                std::to_string(xs.size()) + " and " +
                                                std::to_string(ys.size()));
  }
  if (xs.size() < 2) throw Error(ErrorCode::kEmptyInput, "pearson needs at least two points");
  const auto n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kConstantSeries, "pearson: a series is constant");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n_classes)
      : n_(n_classes), counts_(n_classes * n_classes, 0) {
    if (n_classes < 2) throw Error(ErrorCode::kInvalidArgument, "confusion matrix needs >= 2 classes");
  }

  std::size_t n_classes() const { return n_; }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * n_ + predicted];
  }
  void add(std::size_t truth, std::size_t predicted, std::uint64_t count = 1) {
    counts_[truth * n_ + predicted] += count;
  }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
  }
  std::uint64_t trace() const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += at(i, i);
    return t;
  }
  std::uint64_t row_sum(std::size_t truth) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < n_; ++j) s += at(truth, j);
    return s;
  }
  std::uint64_t column_sum(std::size_t predicted) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += at(i, predicted);
    return s;
  }

  // CSV grid with a header row of predicted classes.
  void write_csv(std::ostream& out, const std::vector<std::string>& class_names = {}) const {
    auto name = [&](std::size_t i) {
      return i < class_names.size() ? class_names[i] : std::to_string(i);
    };
    out << "true\\predicted";
    for (std::size_t j = 0; j < n_; ++j) out << ',' << name(j);
    out << '\n';
    for (std::size_t i = 0; i < n_; ++i) {
      out << name(i);
      for (std::size_t j = 0; j < n_; ++j) out << ',' << at(i, j);
      out << '\n';
    }
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n_; ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t j = 0; j < n_; ++j) row.push_back(at(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

inline ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted,
                                 std::size_t n_classes) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kLengthMismatch, "confusion: " + std::to_string(truth.size()) +
                                                " true labels vs " +
                                                std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix m(n_classes);
  const auto n = static_cast<int>(n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= n || predicted[i] < 0 || predicted[i] >= n) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "label pair (" + std::to_string(truth[i]) + ", " +
                      std::to_string(predicted[i]) + ") outside 0.." + std::to_string(n - 1));
    }
    m.add(static_cast<std::size_t>(truth[i]), static_cast<std::size_t>(predicted[i]));
  }
  return m;
}

struct ClassificationMetrics {
  double accuracy = 0.0;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
};

// Per-class precision/recall/F1 averaged with true-class support as weights.
// An undefined per-class value (no predictions, no support) counts as 0.
inline ClassificationMetrics classification_metrics(const ConfusionMatrix& m) {
  const auto total = static_cast<double>(m.total());
  if (total == 0.0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  ClassificationMetrics out;
  out.accuracy = static_cast<double>(m.trace()) / total;
  for (std::size_t c = 0; c < m.n_classes(); ++c) {
    const auto tp = static_cast<double>(m.at(c, c));
    const auto support = static_cast<double>(m.row_sum(c));
    const auto predicted = static_cast<double>(m.column_sum(c));
    const double precision = predicted > 0 ? tp / predicted : 0.0;
    const double recall = support > 0 ? tp / support : 0.0;
    const double f1 =
        precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    const double weight = support / total;
    out.weighted_precision += weight * precision;
    out.weighted_recall += weight * recall;
    out.weighted_f1 += weight * f1;
  }
  return out;
}

// kLinear uses w_ij = |i - j|, kQuadratic w_ij = (i - j)^2.
enum class KappaWeighting { kLinear, kQuadratic };

inline KappaWeighting parse_kappa_weighting(std::string_view name) {
  if (name == "linear-paper" || name == "linear") return KappaWeighting::kLinear;
  if (name == "quadratic") return KappaWeighting::kQuadratic;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown QWK weighting '" + std::string(name) + "' (expected linear-paper or quadratic)");
}

inline std::string_view kappa_weighting_name(KappaWeighting w) {
  return w == KappaWeighting::kLinear ? "linear-paper" : "quadratic";
}

// Weighted kappa: 1 - sum(w x) / sum(w m), where m is the chance matrix
// (outer product of true and predicted marginals over the total).
inline double qwk(const ConfusionMatrix& m, KappaWeighting weighting = KappaWeighting::kLinear) {
  const auto total = static_cast<double>(m.total());
  if (total == 0.0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  const std::size_t n = m.n_classes();
  std::vector<double> rows(n);
  std::vector<double> cols(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i] = static_cast<double>(m.row_sum(i));
    cols[i] = static_cast<double>(m.column_sum(i));
  }
  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(static_cast<double>(i) - static_cast<double>(j));
      const double w = weighting == KappaWeighting::kLinear ? d : d * d;
      observed += w * static_cast<double>(m.at(i, j));
      expected += w * rows[i] * cols[j] / total;
    }
  }
  if (expected == 0.0) {
    if (observed == 0.0) return 1.0;
    throw Error(ErrorCode::kDegenerateMarginals, "expected weighted disagreement is zero");
  }
  return 1.0 - observed / expected;
}

// dataset -> measure -> correlation with gold labels.
using CorrelationTable = std::map<std::string, std::map<std::string, double>>;

struct RankingRow {
  std::string measure;
  std::vector<std::optional<int>> ranks;  // one per dataset, nullopt if unavailable
  double average_rank = 0.0;
};

struct RankingTable {
  std::vector<std::string> datasets;
  std::vector<RankingRow> rows;  // sorted by average rank

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json ranks = nlohmann::ordered_json::object();
      for (std::size_t d = 0; d < datasets.size(); ++d) {
        ranks[datasets[d]] = row.ranks[d] ? nlohmann::ordered_json(*row.ranks[d]) : nullptr;
      }
      out.push_back({{"measure", row.measure}, {"ranks", ranks}, {"average_rank", row.average_rank}});
    }
    return out;
  }

  // Aligned text: one row per measure, "/" where a measure is unavailable.
  std::string to_text() const {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{"Measure"};
    header.insert(header.end(), datasets.begin(), datasets.end());
    header.push_back("Avg. rank");
    cells.push_back(header);
    for (const auto& row : rows) {
      std::vector<std::string> line{row.measure};
      for (const auto& r : row.ranks) line.push_back(r ? std::to_string(*r) : "/");
      char avg[32];
      std::snprintf(avg, sizeof avg, "%.2f", row.average_rank);
      line.emplace_back(avg);
      cells.push_back(std::move(line));
    }
    return render_columns(cells);
  }

  static std::string render_columns(const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::size_t> widths;
    for (const auto& line : cells) {
      widths.resize(std::max(widths.size(), line.size()), 0);
      for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], line[i].size());
    }
    std::ostringstream out;
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (i > 0) out << "  ";
        out << line[i];
        if (i + 1 < line.size()) out << std::string(widths[i] - line[i].size(), ' ');
      }
      out << '\n';
    }
    return out.str();
  }
};

// Larger is better: the correlation itself for measures that grow with
// difficulty, its negation for FRE.
inline double goodness(std::string_view measure, double rho) {
  return direction_of(measure) == Direction::kHigherIsEasier ? -rho : rho;
}

// Per dataset, measures ranked by descending goodness; tied measures share
// the smaller rank and the next rank skips. Rows are ordered by average rank
// over the datasets where the measure is available (then by name).
inline RankingTable rank_measures(const CorrelationTable& correlations) {
  RankingTable table;
  std::map<std::string, std::vector<std::optional<int>>> ranks;
  for (const auto& [dataset, measures] : correlations) {
    for (const auto& [measure, rho] : measures) ranks.try_emplace(measure);
  }
  std::size_t d = 0;
  for (const auto& [dataset, measures] : correlations) {
    table.datasets.push_back(dataset);
    for (auto& [measure, list] : ranks) list.resize(correlations.size());
    for (const auto& [measure, rho] : measures) {
      const double g = goodness(measure, rho);
      int better = 0;
      for (const auto& [other, other_rho] : measures) {
        if (goodness(other, other_rho) > g) ++better;
      }
      ranks[measure][d] = better + 1;
    }
    ++d;
  }
  for (auto& [measure, list] : ranks) {
    RankingRow row{measure, list, 0.0};
    int sum = 0;
    int available = 0;
    for (const auto& r : list) {
      if (r) {
        sum += *r;
        ++available;
      }
    }
    row.average_rank = available > 0 ? static_cast<double>(sum) / available : 0.0;
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const RankingRow& a, const RankingRow& b) {
                     return a.average_rank < b.average_rank;
                   });
  return table;
}

// Correlation table as aligned text, measures as rows and datasets as
// columns.
inline std::string correlation_table_text(const CorrelationTable& correlations,
                                          const std::vector<std::string>& measure_order) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Measure"};
  for (const auto& [dataset, measures] : correlations) header.push_back(dataset);
  cells.push_back(header);
  for (const auto& measure : measure_order) {
    std::vector<std::string> line{measure};
    for (const auto& [dataset, measures] : correlations) {
      const auto it = measures.find(measure);
      if (it == measures.end()) {
        line.emplace_back("/");
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", it->second);
        line.emplace_back(buf);
      }
    }
    cells.push_back(std::move(line));
  }
  return RankingTable::render_columns(cells);
}

}  // namespace readlab
