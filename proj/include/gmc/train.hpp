//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "gmc/model.hpp"

namespace gmc {

// Linear warmup from max_lr*init_lr_ratio to max_lr across the warmup
// window, then exponential decay hitting max_lr*final_lr_ratio exactly at
// total_steps. The warmup window is warmup_epochs/epochs of total_steps;
// with warmup_epochs == 0 the schedule starts at max_lr.
double lr_at(long step, long total_steps, const TrainConfig& config);

struct EpochStats {
  double train_loss = 0.0;  // mean per-molecule loss
  double val_metric = 0.0;  // AUC for classification, RMSE for regression
};

struct TrainResult {
  ModelParams model;  // weights of the best-validation epoch
  std::vector<EpochStats> history;
  int best_epoch = 0;
};

// Adam-driven training, deterministic per config.seed (fixed shuffle and
// dropout streams). Throws Diverged when the loss goes non-finite or runs
// away from its starting value.
TrainResult train(const std::vector<MolGraph>& train_set,
                  const std::vector<MolGraph>& val_set,
                  const TrainConfig& config,
                  const std::string& feat_fingerprint = "");

// Eval-mode predictions in input order: probabilities for classification,
// raw values for regression. Refuses graphs featurized under a different
// fingerprint than the model was trained with.
std::vector<double> predict_batch(const ModelParams& model,
                                  const std::vector<MolGraph>& graphs,
                                  const std::string& fingerprint);

// Validation score where higher is better (AUC, or -RMSE for regression).
// Falls back to negative mean loss when AUC is undefined on the split.
double validation_score(const ModelParams& model,
                        const std::vector<MolGraph>& graphs);

}  // namespace gmc
