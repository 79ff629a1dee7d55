//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

namespace gmc {

// Rank-based AUC-ROC (Mann-Whitney with mid-rank ties):
//   AUC = (R+ - n+(n+ + 1)/2) / (n+ n-)
// labels are 0/1. Throws SingleClass unless both classes occur.
double auc_roc(const std::vector<double>& scores,
               const std::vector<double>& labels);

double rmse(const std::vector<double>& pred, const std::vector<double>& truth);

double pearson(const std::vector<double>& pred,
               const std::vector<double>& truth);

struct MetricSummary {
  std::vector<double> values;
  double mean = 0.0;
  double std = 0.0;  // sample std (n-1)
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

// Mean, sample std and a Student-t confidence interval (df <= 40 from an
// embedded table). level is the two-sided coverage, 0.95 by default.
MetricSummary summarize(const std::vector<double>& values, double level = 0.95);

// 97.5% Student-t quantile for df in [1, 40]; larger df clamp to 40.
double t_quantile_975(int df);

}  // namespace gmc
