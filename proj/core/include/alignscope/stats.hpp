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

#ifndef ALIGNSCOPE_STATS_HPP_
#define ALIGNSCOPE_STATS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignscope/alignment.hpp"

namespace alignscope::stats {

// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

double mean(std::span<const double> values);
// Median of an unsorted sample; requires a non-empty input.
double median(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for n < 2.
double sample_sd(std::span<const double> values);

// Two-sided Student-t quantile t_{1 - (1 - level)/2, df}.
double student_t_critical(double level, double df);
// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double df);

struct MeanCi {
  double mean = 0.0;
  std::optional<double> half_width;  // null when n < 2
  std::size_t n = 0;
};

// Mean with a two-sided 95% Student-t half-width t_{0.975,n-1} * s / sqrt(n).
MeanCi mean_ci95(std::span<const double> values);

// Least-squares slope of y against x = 1..n. Requires n >= 2.
double ols_slope(std::span<const double> y);

struct SpearmanResult {
  std::optional<double> rho;  // empty when degenerate
  bool degenerate = false;    // constant input on either side
};

// Pearson correlation of average-tied ranks. Requires equal lengths >= 2.
SpearmanResult spearman_rho(std::span<const double> x, std::span<const double> y);

enum class WilcoxonMethod { kExact, kNormal };
std::string_view to_string(WilcoxonMethod method);

// Samples with at most this many non-zero differences use the exact null.
inline constexpr std::size_t kWilcoxonExactMax = 25;

struct WilcoxonResult {
  double p = 1.0;
  double w_plus = 0.0;          // sum of positive ranks
  std::size_t n_used = 0;       // differences left after dropping zeros
  std::size_t zeros_dropped = 0;
  bool degenerate = false;      // no non-zero differences
  WilcoxonMethod method = WilcoxonMethod::kExact;
};

// Two-sided signed-rank test of median(d) == 0. Zeros are dropped, tied
// |d| share average ranks. The exact null distribution of W+ is counted
// over all 2^m sign assignments for m <= kWilcoxonExactMax; larger samples
// use the normal approximation with tie and continuity corrections.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences);

struct FriedmanResult {
  double statistic = 0.0;
  double p = 1.0;
  std::size_t n = 0;
  std::size_t k = 0;
};

// Rows are subjects, columns conditions. Within-row ties get average
// ranks and the tie-corrected statistic; chi-square with k-1 df.
FriedmanResult friedman(const std::vector<std::vector<double>>& matrix);

struct TrendResult {
  std::string score_name;
  std::vector<std::string> dialogue_ids;   // informative dialogues only
  std::vector<double> per_dialogue_rho;    // parallel to dialogue_ids
  std::optional<double> median_rho;
  WilcoxonResult wilcoxon;
  std::size_t degenerate_count = 0;
  std::size_t n = 0;                       // per_dialogue_rho.size()
};

// Spearman rho of each trajectory's score against its round index, then a
// signed-rank test of the rho values against zero. Constant trajectories
// are counted in degenerate_count and left out. Requires >= 2 trajectories.
TrendResult trend_analysis(std::span<const Trajectory> trajectories, Score score);

nlohmann::json to_json(const TrendResult& result);

struct ConditionTestResult {
  std::string metric_name;
  FriedmanResult friedman;
  // Keyed "a|b" for condition names a, b in input order.
  std::map<std::string, WilcoxonResult> pairwise;
};

// Friedman across the columns, then paired signed-rank tests for every
// unordered column pair.
ConditionTestResult condition_tests(std::string metric_name,
                                    const std::vector<std::vector<double>>& matrix,
                                    const std::vector<std::string>& condition_names);

nlohmann::json to_json(const ConditionTestResult& result);

}  // namespace alignscope::stats

#endif  // ALIGNSCOPE_STATS_HPP_
