//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmc/error.hpp"
#include "gmc/metrics.hpp"

namespace gmc {

double lr_at(long step, long total_steps, const TrainConfig& config) {
  const double init_lr = config.max_lr * config.init_lr_ratio;
  const long warmup =
      config.epochs > 0
          ? (total_steps * static_cast<long>(config.warmup_epochs)) /
                static_cast<long>(config.epochs)
          : 0;

  if (warmup > 0 && step <= warmup) {
    return init_lr + (config.max_lr - init_lr) *
                         (static_cast<double>(step) /
                          static_cast<double>(warmup));
  }
  if (total_steps <= warmup) return config.max_lr;
  const double progress = static_cast<double>(step - warmup) /
                          static_cast<double>(total_steps - warmup);
  return config.max_lr * std::pow(config.final_lr_ratio, progress);
}

namespace {

// Adam state per weight array.
struct AdamState {
  std::vector<Eigen::MatrixXd> m, v;
  long t = 0;

  explicit AdamState(ModelParams& params) {
    for (auto& [name, mat] : params.param_refs()) {
      m.push_back(Eigen::MatrixXd::Zero(mat->rows(), mat->cols()));
      v.push_back(Eigen::MatrixXd::Zero(mat->rows(), mat->cols()));
    }
  }

  void step(ModelParams& params, const ModelParams& grads, double lr) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    auto prefs = params.param_refs();
    auto grefs = grads.param_refs();
    for (std::size_t i = 0; i < prefs.size(); ++i) {
      const Eigen::MatrixXd& g = *grefs[i].second;
      m[i] = beta1 * m[i] + (1.0 - beta1) * g;
      v[i] = beta2 * v[i] + (1.0 - beta2) * g.cwiseProduct(g);
      prefs[i].second->array() -=
          lr * (m[i].array() / bc1) /
          ((v[i].array() / bc2).sqrt() + eps);
    }
  }
};

double mean_loss(const ModelParams& model, const std::vector<MolGraph>& graphs) {
  double total = 0.0;
  for (const MolGraph& g : graphs) {
    const ForwardTape tape = forward(model, g, false);
    total += loss_from_output(tape.output, g.label, model.config.task);
  }
  return total / static_cast<double>(graphs.size());
}

}  // namespace

double validation_score(const ModelParams& model,
                        const std::vector<MolGraph>& graphs) {
  std::vector<double> preds, labels;
  preds.reserve(graphs.size());
  labels.reserve(graphs.size());
  for (const MolGraph& g : graphs) {
    const ForwardTape tape = forward(model, g, false);
    preds.push_back(prediction_from_output(tape.output, model.config.task));
    labels.push_back(g.label);
  }
  if (model.config.task == Task::regression) return -rmse(preds, labels);
  try {
    return auc_roc(preds, labels);
  } catch (const SingleClass&) {
    return -mean_loss(model, graphs);
  }
}

TrainResult train(const std::vector<MolGraph>& train_set,
                  const std::vector<MolGraph>& val_set,
                  const TrainConfig& config,
                  const std::string& feat_fingerprint) {
  config.validate();
  if (train_set.empty() || val_set.empty())
    throw EmptyDataset("train and validation sets must be non-empty");

  ModelParams model = init_model(config, config.seed,
                                 train_set.front().node_width());
  model.feat_fingerprint = feat_fingerprint;
  ModelParams grads = model.zeros_like();
  AdamState adam(model);

  rng::Engine shuffle_rng(rng::derive(config.seed, 0x5f));
  rng::Engine dropout_rng(rng::derive(config.seed, 0xd0));

  const long n_train = static_cast<long>(train_set.size());
  const long batches_per_epoch =
      (n_train + config.batch_size - 1) / config.batch_size;
  const long total_steps = batches_per_epoch * config.epochs;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  result.history.reserve(static_cast<std::size_t>(config.epochs));
  double best_score = -std::numeric_limits<double>::infinity();
  double loss_floor = -1.0;  // first-batch loss, baseline of the runaway guard
  long step = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng::shuffle(order, shuffle_rng);
    double epoch_loss = 0.0;

    for (long b = 0; b < batches_per_epoch; ++b) {
      const std::size_t begin = static_cast<std::size_t>(b) *
                                static_cast<std::size_t>(config.batch_size);
      const std::size_t end = std::min(
          begin + static_cast<std::size_t>(config.batch_size), order.size());
      const auto batch_n = static_cast<double>(end - begin);

      for (auto& [name, mat] : grads.param_refs()) mat->setZero();
      double batch_loss = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const MolGraph& g = train_set[order[i]];
        const ForwardTape tape = forward(model, g, true, &dropout_rng);
        batch_loss += loss_from_output(tape.output, g.label, config.task);
        backward(model, tape,
                 loss_grad_output(tape.output, g.label, config.task) / batch_n,
                 grads);
      }
      batch_loss /= batch_n;
      if (!std::isfinite(batch_loss))
        throw Diverged("non-finite training loss at step " +
                       std::to_string(step));
      if (loss_floor < 0.0) loss_floor = std::max(batch_loss, 1.0);
      epoch_loss += batch_loss * batch_n;

      adam.step(model, grads, lr_at(step, total_steps, config));
      ++step;
    }

    epoch_loss /= static_cast<double>(n_train);
    if (epoch_loss > 100.0 * loss_floor)
      throw Diverged("training loss ran away at epoch " +
                     std::to_string(epoch));

    const double score = validation_score(model, val_set);
    EpochStats stats;
    stats.train_loss = epoch_loss;
    stats.val_metric = config.task == Task::regression ? -score : score;
    result.history.push_back(stats);

    if (score > best_score) {
      best_score = score;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

std::vector<double> predict_batch(const ModelParams& model,
                                  const std::vector<MolGraph>& graphs,
                                  const std::string& fingerprint) {
  if (!model.feat_fingerprint.empty() && !fingerprint.empty() &&
      fingerprint != model.feat_fingerprint)
    throw FingerprintMismatch("feature fingerprint '" + fingerprint +
                              "' does not match the model's '" +
                              model.feat_fingerprint + "'");
  std::vector<double> out;
  out.reserve(graphs.size());
  for (const MolGraph& g : graphs) {
    const ForwardTape tape = forward(model, g, false);
    out.push_back(prediction_from_output(tape.output, model.config.task));
  }
  return out;
}

}  // namespace gmc
