//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "gmc/error.hpp"

namespace gmc {

double auc_roc(const std::vector<double>& scores,
               const std::vector<double>& labels) {
  if (scores.size() != labels.size())
    throw LengthMismatch("auc_roc: score/label length mismatch");
  const std::size_t n = scores.size();

  std::size_t n_pos = 0;
  for (double label : labels) n_pos += label > 0.5 ? 1 : 0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw SingleClass("auc_roc requires both classes");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Mid-rank assignment across tied score runs.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * (static_cast<double>(i + 1) +
                                   static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k)
      if (labels[order[k]] > 0.5) rank_sum_pos += mid_rank;
    i = j + 1;
  }

  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

double rmse(const std::vector<double>& pred, const std::vector<double>& truth) {
  if (pred.size() != truth.size() || pred.empty())
    throw LengthMismatch("rmse: need equal, non-zero lengths");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = truth[i] - pred[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

double pearson(const std::vector<double>& pred,
               const std::vector<double>& truth) {
  if (pred.size() != truth.size() || pred.empty())
    throw LengthMismatch("pearson: need equal, non-zero lengths");
  const auto n = static_cast<double>(pred.size());
  const double mx = std::accumulate(pred.begin(), pred.end(), 0.0) / n;
  const double my = std::accumulate(truth.begin(), truth.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double dx = pred[i] - mx;
    const double dy = truth[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ZeroVariance("pearson is undefined for a constant vector");
  return sxy / std::sqrt(sxx * syy);
}

double t_quantile_975(int df) {
  // Two-sided 95% critical values t_{df, 0.975}, df 1..40.
  static constexpr std::array<double, 40> table = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
      2.040,  2.037, 2.035, 2.032, 2.030, 2.028, 2.026, 2.024, 2.023, 2.021,
  };
  if (df < 1) throw TooFewSamples("t quantile needs df >= 1");
  return table[static_cast<std::size_t>(std::min(df, 40) - 1)];
}

MetricSummary summarize(const std::vector<double>& values, double level) {
  if (values.size() < 2)
    throw TooFewSamples("summarize needs at least 2 values");
  if (level != 0.95)
    throw RangeError("only the 95% confidence level is supported");

  MetricSummary s;
  s.values = values;
  const auto n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    // all equal: exactly zero spread, no rounding residue from the mean
    s.mean = *lo;
    s.ci_lo = s.ci_hi = *lo;
    return s;
  }
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / (n - 1.0));
  const double half = t_quantile_975(static_cast<int>(values.size()) - 1) *
                      s.std / std::sqrt(n);
  s.ci_lo = s.mean - half;
  s.ci_hi = s.mean + half;
  return s;
}

}  // namespace gmc
