// Copyright 2026 The alignscope Authors
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

#include "alignscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "alignscope/error.hpp"

namespace alignscope::stats {

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank ((i+1) + (j+1)) / 2.
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::kInternal, "median of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  return sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double student_t_critical(double level, double df) {
  boost::math::students_t_distribution<double> dist(df);
  return boost::math::quantile(dist, 1.0 - (1.0 - level) / 2.0);
}

double chi_square_sf(double statistic, double df) {
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

MeanCi mean_ci95(std::span<const double> values) {
  MeanCi result;
  result.n = values.size();
  result.mean = mean(values);
  if (values.size() >= 2) {
    const double n = static_cast<double>(values.size());
    result.half_width = student_t_critical(0.95, n - 1.0) * sample_sd(values) / std::sqrt(n);
  }
  return result;
}

double ols_slope(std::span<const double> y) {
  if (y.size() < 2) throw Error(ErrorKind::kInternal, "slope needs at least two points");
  const double n = static_cast<double>(y.size());
  const double x_mean = (n + 1.0) / 2.0;
  const double y_mean = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = static_cast<double>(i + 1) - x_mean;
    sxy += dx * (y[i] - y_mean);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

SpearmanResult spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::kData, "spearman needs two samples of equal length >= 2");
  }
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  SpearmanResult result;
  if (sxx == 0.0 || syy == 0.0) {
    result.degenerate = true;
    return result;
  }
  result.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return result;
}

std::string_view to_string(WilcoxonMethod method) {
  return method == WilcoxonMethod::kExact ? "exact" : "normal";
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences) {
  WilcoxonResult result;
  std::vector<double> magnitudes;
  std::vector<bool> positive;
  for (double d : differences) {
    if (d == 0.0) {
      ++result.zeros_dropped;
      continue;
    }
    magnitudes.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  const std::size_t m = magnitudes.size();
  result.n_used = m;
  if (m == 0) {
    result.degenerate = true;
    result.p = 1.0;
    return result;
  }
  const std::vector<double> ranks = average_ranks(magnitudes);
  // Average ranks are multiples of 1/2, so doubled ranks are integers and
  // W+ comparisons below are exact.
  std::vector<std::uint64_t> doubled(m);
  std::uint64_t w2 = 0;
  std::uint64_t total2 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    doubled[i] = static_cast<std::uint64_t>(std::llround(2.0 * ranks[i]));
    total2 += doubled[i];
    if (positive[i]) w2 += doubled[i];
  }
  result.w_plus = static_cast<double>(w2) / 2.0;

  if (m <= kWilcoxonExactMax) {
    result.method = WilcoxonMethod::kExact;
    // counts[s] = number of sign assignments whose doubled W+ equals s.
    std::vector<std::uint64_t> counts(total2 + 1, 0);
    counts[0] = 1;
    std::uint64_t reach = 0;
    for (std::uint64_t r : doubled) {
      for (std::uint64_t s = reach + 1; s-- > 0;) {
        if (counts[s] != 0) counts[s + r] += counts[s];
      }
      reach += r;
    }
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    for (std::uint64_t s = 0; s <= total2; ++s) {
      if (s <= w2) lower += counts[s];
      if (s >= w2) upper += counts[s];
    }
    const double all = std::ldexp(1.0, static_cast<int>(m));
    const double tail = static_cast<double>(std::min(lower, upper)) / all;
    result.p = std::min(1.0, 2.0 * tail);
    return result;
  }

  result.method = WilcoxonMethod::kNormal;
  const double n = static_cast<double>(m);
  const double expected = n * (n + 1.0) / 4.0;
  double tie_term = 0.0;
  {
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  const double deviation = result.w_plus - expected;
  const double corrected = std::max(std::fabs(deviation) - 0.5, 0.0);
  const double z = corrected / std::sqrt(variance);
  result.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

FriedmanResult friedman(const std::vector<std::vector<double>>& matrix) {
  FriedmanResult result;
  result.n = matrix.size();
  if (result.n < 2) throw Error(ErrorKind::kData, "friedman needs at least two subjects");
  result.k = matrix.front().size();
  if (result.k < 2) throw Error(ErrorKind::kData, "friedman needs at least two conditions");
  const double n = static_cast<double>(result.n);
  const double k = static_cast<double>(result.k);
  std::vector<double> rank_sums(result.k, 0.0);
  double sum_sq_ranks = 0.0;
  for (const auto& row : matrix) {
    if (row.size() != result.k) throw Error(ErrorKind::kData, "friedman rows differ in length");
    const std::vector<double> ranks = average_ranks(row);
    for (std::size_t j = 0; j < result.k; ++j) {
      rank_sums[j] += ranks[j];
      sum_sq_ranks += ranks[j] * ranks[j];
    }
  }
  const double center = n * (k + 1.0) / 2.0;
  double numerator = 0.0;
  for (double r : rank_sums) numerator += (r - center) * (r - center);
  const double denominator = sum_sq_ranks - n * k * (k + 1.0) * (k + 1.0) / 4.0;
  if (denominator <= 1e-12 * n * k * k) {
    result.statistic = 0.0;
    result.p = 1.0;
    return result;
  }
  result.statistic = (k - 1.0) * numerator / denominator;
  result.p = chi_square_sf(result.statistic, k - 1.0);
  return result;
}

TrendResult trend_analysis(std::span<const Trajectory> trajectories, Score score) {
  if (trajectories.size() < 2) {
    throw Error(ErrorKind::kData, "trend analysis needs at least two dialogues");
  }
  TrendResult result;
  result.score_name = std::string(to_string(score));
  for (const Trajectory& trajectory : trajectories) {
    if (trajectory.scores.size() < 2) {
      ++result.degenerate_count;
      continue;
    }
    std::vector<double> rounds;
    std::vector<double> values;
    for (const AlignmentVector& v : trajectory.scores) {
      rounds.push_back(static_cast<double>(v.round));
      values.push_back(v.get(score));
    }
    const SpearmanResult rho = spearman_rho(rounds, values);
    if (rho.degenerate) {
      ++result.degenerate_count;
      continue;
    }
    result.dialogue_ids.push_back(trajectory.dialogue_id);
    result.per_dialogue_rho.push_back(*rho.rho);
  }
  result.n = result.per_dialogue_rho.size();
  if (!result.per_dialogue_rho.empty()) result.median_rho = median(result.per_dialogue_rho);
  result.wilcoxon = wilcoxon_signed_rank(result.per_dialogue_rho);
  return result;
}

nlohmann::json to_json(const TrendResult& result) {
  return {
      {"score", result.score_name},
      {"n", result.n},
      {"median_rho", result.median_rho ? nlohmann::json(*result.median_rho)
                                       : nlohmann::json(nullptr)},
      {"p", result.wilcoxon.p},
      {"degenerate_count", result.degenerate_count},
      {"method", std::string(to_string(result.wilcoxon.method))},
      {"wilcoxon_degenerate", result.wilcoxon.degenerate},
      {"w_plus", result.wilcoxon.w_plus},
  };
}

ConditionTestResult condition_tests(std::string metric_name,
                                    const std::vector<std::vector<double>>& matrix,
                                    const std::vector<std::string>& condition_names) {
  ConditionTestResult result;
  result.metric_name = std::move(metric_name);
  result.friedman = friedman(matrix);
  if (condition_names.size() != result.friedman.k) {
    throw Error(ErrorKind::kInternal, "condition names do not match matrix columns");
  }
  for (std::size_t a = 0; a < condition_names.size(); ++a) {
    for (std::size_t b = a + 1; b < condition_names.size(); ++b) {
      std::vector<double> differences;
      for (const auto& row : matrix) differences.push_back(row[a] - row[b]);
      result.pairwise[condition_names[a] + "|" + condition_names[b]] =
          wilcoxon_signed_rank(differences);
    }
  }
  return result;
}

nlohmann::json to_json(const ConditionTestResult& result) {
  nlohmann::json pairwise = nlohmann::json::object();
  for (const auto& [pair, test] : result.pairwise) {
    pairwise[pair] = {{"p", test.p},
                      {"n", test.n_used},
                      {"method", std::string(to_string(test.method))},
                      {"degenerate", test.degenerate}};
  }
  return {
      {"metric_name", result.metric_name},
      {"friedman_statistic", result.friedman.statistic},
      {"friedman_p", result.friedman.p},
      {"n", result.friedman.n},
      {"k", result.friedman.k},
      {"pairwise", std::move(pairwise)},
  };
}

}  // namespace alignscope::stats
