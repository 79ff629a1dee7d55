//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gmc/featurize.hpp"
#include "gmc/rng.hpp"

namespace gmc {

enum class Task { classification, regression };
enum class Activation { relu, leakyrelu, prelu, tanh_, selu, elu };
enum class Aggregation { mean, sum, norm };

std::string_view task_name(Task t);
std::string_view activation_name(Activation a);
std::string_view aggregation_name(Aggregation a);
Task parse_task(std::string_view s);
Activation parse_activation(std::string_view s);
Aggregation parse_aggregation(std::string_view s);

struct TrainConfig {
  Task task = Task::classification;
  int depth = 3;                 // message-passing iterations T
  int message_hidden_dim = 300;  // hidden-state width, also phi's hidden width
  int ffn_hidden_dim = 300;
  int ffn_num_layers = 2;
  Activation activation = Activation::relu;
  Aggregation aggregation = Aggregation::mean;
  double aggregation_norm = 100.0;
  int batch_size = 32;
  int epochs = 50;
  double max_lr = 1e-3;
  double init_lr_ratio = 0.1;
  double final_lr_ratio = 0.1;
  int warmup_epochs = 2;
  double dropout = 0.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws RangeError on violated invariants
  bool operator==(const TrainConfig&) const = default;
};

// All learnable weights. Hidden states are H = message_hidden_dim wide; the
// message MLP phi maps [h_i | h_j | bond] through one hidden layer of the
// same width.
struct ModelParams {
  TrainConfig config;
  int node_width = 0;
  int edge_width = kBondFeatureWidth;
  std::string feat_fingerprint;  // featurization this model expects

  Eigen::MatrixXd w_in, b_in;      // H x D, H x 1 input projection
  Eigen::MatrixXd msg_w1, msg_b1;  // H x (2H+E), H x 1
  Eigen::MatrixXd msg_w2, msg_b2;  // H x H, H x 1
  Eigen::MatrixXd w_m, w_u, b_upd; // update: tau(W_m h + W_u m + b)
  Eigen::MatrixXd w_a, b_a;        // readout: H x (D+H), H x 1
  std::vector<Eigen::MatrixXd> ffn_w, ffn_b;
  Eigen::MatrixXd prelu_slope;     // 1 x 1, used only by the prelu activation

  // Fixed-order registry over every weight array, used by the optimizer,
  // checkpointing and the finite-difference tests.
  std::vector<std::pair<std::string, Eigen::MatrixXd*>> param_refs();
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> param_refs() const;

  ModelParams zeros_like() const;
};

// Glorot-uniform weights, zero biases, deterministic per seed.
ModelParams init_model(const TrainConfig& config, std::uint64_t seed,
                       int node_width = kCafWidth + 60,
                       int edge_width = kBondFeatureWidth);

// Everything forward() stores for the exact reverse pass.
struct ForwardTape {
  const MolGraph* graph = nullptr;
  Eigen::MatrixXd x;  // D x N, transposed node features
  std::vector<Eigen::MatrixXd> z;           // T+1 hidden states, H x N
  std::vector<Eigen::MatrixXd> edge_pre;    // T, H x E
  std::vector<Eigen::MatrixXd> edge_act;    // T, H x E
  std::vector<Eigen::MatrixXd> msg;         // T, H x N
  std::vector<Eigen::MatrixXd> update_pre;  // T, H x N
  std::vector<Eigen::MatrixXd> drop_mask;   // T, empty unless train dropout
  Eigen::MatrixXd neighbor_sum;             // H x N of z[T]
  Eigen::MatrixXd readout_pre, readout;     // H x N
  Eigen::VectorXd embedding;                // H
  std::vector<Eigen::VectorXd> ffn_pre, ffn_act, ffn_mask;
  double output = 0.0;  // raw head output; logit for classification
  bool train_mode = false;
};

// Runs the network on one molecule. In train mode dropout masks are drawn
// from `dropout_rng` and recorded on the tape.
ForwardTape forward(const ModelParams& model, const MolGraph& graph,
                    bool train_mode = false, rng::Engine* dropout_rng = nullptr);

// prediction as exposed to callers: sigmoid(output) for classification,
// raw output for regression.
double prediction_from_output(double output, Task task);

// Loss on the user-facing prediction: binary cross-entropy for
// classification (prediction in (0,1)), squared error for regression.
double loss(double prediction, double label, Task task);

// Loss directly from the raw head output, numerically stable for
// classification; this is the function train() differentiates.
double loss_from_output(double output, double label, Task task);
double loss_grad_output(double output, double label, Task task);

// Accumulates dLoss/dParams into `grads` (shapes of zeros_like) given the
// seed dLoss/dOutput.
void backward(const ModelParams& model, const ForwardTape& tape,
              double output_grad, ModelParams& grads);

}  // namespace gmc
