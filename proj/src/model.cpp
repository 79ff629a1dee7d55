//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/model.hpp"

#include <cmath>
#include <string>

#include "gmc/error.hpp"

namespace gmc {

namespace {

constexpr double kLeakySlope = 0.1;
constexpr double kSeluLambda = 1.0507009873554804934193349852946;
constexpr double kSeluAlpha = 1.6732632423543772848170429916717;

double activate_one(double x, Activation act, double slope) {
  switch (act) {
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::leakyrelu: return x > 0.0 ? x : kLeakySlope * x;
    case Activation::prelu: return x > 0.0 ? x : slope * x;
    case Activation::tanh_: return std::tanh(x);
    case Activation::selu:
      return x > 0.0 ? kSeluLambda * x
                     : kSeluLambda * kSeluAlpha * (std::exp(x) - 1.0);
    case Activation::elu: return x > 0.0 ? x : std::exp(x) - 1.0;
  }
  return x;
}

double activate_grad_one(double pre, Activation act, double slope) {
  switch (act) {
    case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::leakyrelu: return pre > 0.0 ? 1.0 : kLeakySlope;
    case Activation::prelu: return pre > 0.0 ? 1.0 : slope;
    case Activation::tanh_: {
      const double t = std::tanh(pre);
      return 1.0 - t * t;
    }
    case Activation::selu:
      return pre > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(pre);
    case Activation::elu: return pre > 0.0 ? 1.0 : std::exp(pre);
  }
  return 1.0;
}

Eigen::MatrixXd activate(const Eigen::MatrixXd& pre, Activation act,
                         double slope) {
  return pre.unaryExpr(
      [act, slope](double x) { return activate_one(x, act, slope); });
}

// dpre = act'(pre) .* upstream; the prelu slope gradient accumulates the
// upstream-weighted negative pre-activations.
Eigen::MatrixXd activation_backward(const Eigen::MatrixXd& pre,
                                    const Eigen::MatrixXd& upstream,
                                    Activation act, double slope,
                                    double& dslope) {
  Eigen::MatrixXd dpre(pre.rows(), pre.cols());
  for (Eigen::Index c = 0; c < pre.cols(); ++c) {
    for (Eigen::Index r = 0; r < pre.rows(); ++r) {
      dpre(r, c) =
          upstream(r, c) * activate_grad_one(pre(r, c), act, slope);
      if (act == Activation::prelu && pre(r, c) <= 0.0)
        dslope += upstream(r, c) * pre(r, c);
    }
  }
  return dpre;
}

double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

// log(1 + e^x) without overflow
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

Eigen::MatrixXd glorot_uniform(Eigen::Index rows, Eigen::Index cols,
                               rng::Engine& eng) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd w(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      w(r, c) = rng::uniform(eng, -bound, bound);
  return w;
}

// Inverted-dropout mask: entries are 0 or 1/(1-p).
Eigen::MatrixXd draw_mask(Eigen::Index rows, Eigen::Index cols, double p,
                          rng::Engine& eng) {
  const double keep_scale = 1.0 / (1.0 - p);
  Eigen::MatrixXd mask(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      mask(r, c) = rng::uniform01(eng) < p ? 0.0 : keep_scale;
  return mask;
}

}  // namespace

std::string_view task_name(Task t) {
  return t == Task::classification ? "classification" : "regression";
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::leakyrelu: return "leakyrelu";
    case Activation::prelu: return "prelu";
    case Activation::tanh_: return "tanh";
    case Activation::selu: return "selu";
    case Activation::elu: return "elu";
  }
  return "relu";
}

std::string_view aggregation_name(Aggregation a) {
  switch (a) {
    case Aggregation::mean: return "mean";
    case Aggregation::sum: return "sum";
    case Aggregation::norm: return "norm";
  }
  return "mean";
}

namespace {
std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}
}  // namespace

Task parse_task(std::string_view s) {
  const std::string v = lower(s);
  if (v == "classification") return Task::classification;
  if (v == "regression") return Task::regression;
  throw TypeError("unknown task '" + std::string(s) + "'");
}

Activation parse_activation(std::string_view s) {
  const std::string v = lower(s);
  if (v == "relu") return Activation::relu;
  if (v == "leakyrelu") return Activation::leakyrelu;
  if (v == "prelu") return Activation::prelu;
  if (v == "tanh") return Activation::tanh_;
  if (v == "selu") return Activation::selu;
  if (v == "elu") return Activation::elu;
  throw TypeError("unknown activation '" + std::string(s) + "'");
}

Aggregation parse_aggregation(std::string_view s) {
  const std::string v = lower(s);
  if (v == "mean" || v == "meanaggregation") return Aggregation::mean;
  if (v == "sum" || v == "sumaggregation") return Aggregation::sum;
  if (v == "norm" || v == "normaggregation") return Aggregation::norm;
  throw TypeError("unknown aggregation '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (depth < 2) throw RangeError("depth must be >= 2");
  if (message_hidden_dim < 1) throw RangeError("message_hidden_dim must be >= 1");
  if (ffn_hidden_dim < 1) throw RangeError("ffn_hidden_dim must be >= 1");
  if (ffn_num_layers < 1) throw RangeError("ffn_num_layers must be >= 1");
  if (batch_size < 1) throw RangeError("batch_size must be >= 1");
  if (epochs < 1) throw RangeError("epochs must be >= 1");
  if (!(max_lr > 0.0)) throw RangeError("max_lr must be > 0");
  if (!(init_lr_ratio > 0.0) || init_lr_ratio > 1.0)
    throw RangeError("init_lr_ratio must lie in (0, 1]");
  if (!(final_lr_ratio > 0.0) || final_lr_ratio > 1.0)
    throw RangeError("final_lr_ratio must lie in (0, 1]");
  if (warmup_epochs < 0) throw RangeError("warmup_epochs must be >= 0");
  if (dropout < 0.0 || dropout >= 1.0)
    throw RangeError("dropout must lie in [0, 1)");
  if (!(aggregation_norm > 0.0))
    throw RangeError("aggregation_norm must be > 0");
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> ModelParams::param_refs() {
  std::vector<std::pair<std::string, Eigen::MatrixXd*>> refs = {
      {"w_in", &w_in},   {"b_in", &b_in},     {"msg_w1", &msg_w1},
      {"msg_b1", &msg_b1}, {"msg_w2", &msg_w2}, {"msg_b2", &msg_b2},
      {"w_m", &w_m},     {"w_u", &w_u},       {"b_upd", &b_upd},
      {"w_a", &w_a},     {"b_a", &b_a},
  };
  for (std::size_t l = 0; l < ffn_w.size(); ++l) {
    refs.emplace_back("ffn_w" + std::to_string(l), &ffn_w[l]);
    refs.emplace_back("ffn_b" + std::to_string(l), &ffn_b[l]);
  }
  refs.emplace_back("prelu_slope", &prelu_slope);
  return refs;
}

std::vector<std::pair<std::string, const Eigen::MatrixXd*>>
ModelParams::param_refs() const {
  auto mutable_refs = const_cast<ModelParams*>(this)->param_refs();
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> refs;
  refs.reserve(mutable_refs.size());
  for (auto& [name, ptr] : mutable_refs) refs.emplace_back(name, ptr);
  return refs;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for (auto& [name, mat] : z.param_refs()) mat->setZero();
  return z;
}

ModelParams init_model(const TrainConfig& config, std::uint64_t seed,
                       int node_width, int edge_width) {
  config.validate();
  const int h = config.message_hidden_dim;
  const int f = config.ffn_hidden_dim;
  const int d = node_width;
  const int e = edge_width;

  ModelParams m;
  m.config = config;
  m.config.seed = seed;
  m.node_width = d;
  m.edge_width = e;

  rng::Engine eng(rng::derive(seed, 0x1717));
  m.w_in = glorot_uniform(h, d, eng);
  m.b_in = Eigen::MatrixXd::Zero(h, 1);
  m.msg_w1 = glorot_uniform(h, 2 * h + e, eng);
  m.msg_b1 = Eigen::MatrixXd::Zero(h, 1);
  m.msg_w2 = glorot_uniform(h, h, eng);
  m.msg_b2 = Eigen::MatrixXd::Zero(h, 1);
  m.w_m = glorot_uniform(h, h, eng);
  m.w_u = glorot_uniform(h, h, eng);
  m.b_upd = Eigen::MatrixXd::Zero(h, 1);
  m.w_a = glorot_uniform(h, d + h, eng);
  m.b_a = Eigen::MatrixXd::Zero(h, 1);

  const int layers = config.ffn_num_layers;
  for (int l = 0; l < layers; ++l) {
    const int in = l == 0 ? h : f;
    const int out = l == layers - 1 ? 1 : f;
    m.ffn_w.push_back(glorot_uniform(out, in, eng));
    m.ffn_b.push_back(Eigen::MatrixXd::Zero(out, 1));
  }

  m.prelu_slope = Eigen::MatrixXd::Constant(1, 1, 0.25);
  return m;
}

ForwardTape forward(const ModelParams& model, const MolGraph& graph,
                    bool train_mode, rng::Engine* dropout_rng) {
  const auto& cfg = model.config;
  const int h = cfg.message_hidden_dim;
  const auto n = static_cast<Eigen::Index>(graph.atom_count());
  const auto n_edges = static_cast<Eigen::Index>(graph.edges.size());

  if (graph.node_width() != model.node_width)
    throw DimensionMismatch("graph node width " +
                            std::to_string(graph.node_width()) +
                            " != model input width " +
                            std::to_string(model.node_width));
  if (n_edges > 0 && graph.edge_features.cols() != model.edge_width)
    throw DimensionMismatch("graph edge width mismatch");

  const double slope = model.prelu_slope(0, 0);
  const bool use_dropout =
      train_mode && cfg.dropout > 0.0 && dropout_rng != nullptr;

  ForwardTape tape;
  tape.graph = &graph;
  tape.train_mode = train_mode;
  tape.x = graph.node_features.transpose();

  tape.z.reserve(static_cast<std::size_t>(cfg.depth) + 1);
  tape.z.push_back((model.w_in * tape.x).colwise() + model.b_in.col(0));

  for (int t = 0; t < cfg.depth; ++t) {
    const Eigen::MatrixXd& z = tape.z.back();

    // phi on every directed edge: [h_dst | h_src | bond]
    Eigen::MatrixXd edge_in(2 * h + model.edge_width, n_edges);
    for (Eigen::Index e = 0; e < n_edges; ++e) {
      const auto [src, dst] = graph.edges[static_cast<std::size_t>(e)];
      edge_in.col(e).head(h) = z.col(dst);
      edge_in.col(e).segment(h, h) = z.col(src);
      edge_in.col(e).tail(model.edge_width) =
          graph.edge_features.row(e).transpose();
    }
    Eigen::MatrixXd edge_pre =
        (model.msg_w1 * edge_in).colwise() + model.msg_b1.col(0);
    Eigen::MatrixXd edge_act = activate(edge_pre, cfg.activation, slope);
    Eigen::MatrixXd phi =
        (model.msg_w2 * edge_act).colwise() + model.msg_b2.col(0);

    Eigen::MatrixXd msg = Eigen::MatrixXd::Zero(h, n);
    for (Eigen::Index e = 0; e < n_edges; ++e)
      msg.col(graph.edges[static_cast<std::size_t>(e)].second) += phi.col(e);

    Eigen::MatrixXd update_pre =
        ((model.w_m * z + model.w_u * msg).colwise() + model.b_upd.col(0));
    Eigen::MatrixXd z_next = activate(update_pre, cfg.activation, slope);
    if (use_dropout) {
      Eigen::MatrixXd mask = draw_mask(h, n, cfg.dropout, *dropout_rng);
      z_next.array() *= mask.array();
      tape.drop_mask.push_back(std::move(mask));
    }

    tape.edge_pre.push_back(std::move(edge_pre));
    tape.edge_act.push_back(std::move(edge_act));
    tape.msg.push_back(std::move(msg));
    tape.update_pre.push_back(std::move(update_pre));
    tape.z.push_back(std::move(z_next));
  }

  // Readout: tau(W_a [x_i | sum_{j in N(i)} h_j^T])
  tape.neighbor_sum = Eigen::MatrixXd::Zero(h, n);
  const Eigen::MatrixXd& z_final = tape.z.back();
  for (const auto& [src, dst] : graph.edges)
    tape.neighbor_sum.col(dst) += z_final.col(src);

  Eigen::MatrixXd concat(model.node_width + h, n);
  concat.topRows(model.node_width) = tape.x;
  concat.bottomRows(h) = tape.neighbor_sum;
  tape.readout_pre = (model.w_a * concat).colwise() + model.b_a.col(0);
  tape.readout = activate(tape.readout_pre, cfg.activation, slope);

  Eigen::VectorXd embedding = tape.readout.rowwise().sum();
  switch (cfg.aggregation) {
    case Aggregation::sum: break;
    case Aggregation::mean: embedding /= static_cast<double>(n); break;
    case Aggregation::norm: embedding /= cfg.aggregation_norm; break;
  }
  tape.embedding = std::move(embedding);

  Eigen::VectorXd v = tape.embedding;
  const int layers = cfg.ffn_num_layers;
  for (int l = 0; l < layers - 1; ++l) {
    Eigen::VectorXd pre = model.ffn_w[static_cast<std::size_t>(l)] * v +
                          model.ffn_b[static_cast<std::size_t>(l)].col(0);
    Eigen::VectorXd act = pre.unaryExpr([&](double x) {
      return activate_one(x, cfg.activation, slope);
    });
    if (use_dropout) {
      Eigen::MatrixXd mask = draw_mask(act.size(), 1, cfg.dropout, *dropout_rng);
      act.array() *= mask.col(0).array();
      tape.ffn_mask.push_back(mask.col(0));
    }
    tape.ffn_pre.push_back(std::move(pre));
    tape.ffn_act.push_back(act);
    v = std::move(act);
  }
  tape.output = (model.ffn_w.back() * v + model.ffn_b.back().col(0))(0);
  return tape;
}

double prediction_from_output(double output, Task task) {
  return task == Task::classification ? sigmoid(output) : output;
}

double loss(double prediction, double label, Task task) {
  if (task == Task::regression) {
    const double d = prediction - label;
    return d * d;
  }
  if (!(prediction > 0.0) || !(prediction < 1.0))
    throw RangeError("classification prediction must lie in (0, 1)");
  return -(label * std::log(prediction) +
           (1.0 - label) * std::log(1.0 - prediction));
}

double loss_from_output(double output, double label, Task task) {
  if (task == Task::regression) {
    const double d = output - label;
    return d * d;
  }
  // BCE on the logit: softplus(output) - label * output
  return softplus(output) - label * output;
}

double loss_grad_output(double output, double label, Task task) {
  if (task == Task::regression) return 2.0 * (output - label);
  return sigmoid(output) - label;
}

void backward(const ModelParams& model, const ForwardTape& tape,
              double output_grad, ModelParams& grads) {
  const auto& cfg = model.config;
  const int h = cfg.message_hidden_dim;
  const MolGraph& graph = *tape.graph;
  const auto n = static_cast<Eigen::Index>(graph.atom_count());
  const auto n_edges = static_cast<Eigen::Index>(graph.edges.size());
  const double slope = model.prelu_slope(0, 0);
  double dslope = 0.0;

  // --- FFN ---
  const int layers = cfg.ffn_num_layers;
  Eigen::VectorXd dv(1);
  dv(0) = output_grad;
  for (int l = layers - 1; l >= 0; --l) {
    const Eigen::VectorXd& input =
        l == 0 ? tape.embedding : tape.ffn_act[static_cast<std::size_t>(l - 1)];
    grads.ffn_w[static_cast<std::size_t>(l)] += dv * input.transpose();
    grads.ffn_b[static_cast<std::size_t>(l)].col(0) += dv;
    Eigen::VectorXd dinput =
        model.ffn_w[static_cast<std::size_t>(l)].transpose() * dv;
    if (l > 0) {
      if (!tape.ffn_mask.empty())
        dinput.array() *= tape.ffn_mask[static_cast<std::size_t>(l - 1)].array();
      Eigen::MatrixXd dpre = activation_backward(
          tape.ffn_pre[static_cast<std::size_t>(l - 1)], dinput,
          cfg.activation, slope, dslope);
      dv = dpre.col(0);
    } else {
      dv = std::move(dinput);
    }
  }
  Eigen::VectorXd d_embedding = dv;

  // --- aggregation ---
  double agg_scale = 1.0;
  switch (cfg.aggregation) {
    case Aggregation::sum: break;
    case Aggregation::mean: agg_scale = 1.0 / static_cast<double>(n); break;
    case Aggregation::norm: agg_scale = 1.0 / cfg.aggregation_norm; break;
  }
  Eigen::MatrixXd d_readout = (d_embedding * agg_scale).replicate(1, n);

  // --- readout ---
  Eigen::MatrixXd d_readout_pre = activation_backward(
      tape.readout_pre, d_readout, cfg.activation, slope, dslope);
  Eigen::MatrixXd concat(model.node_width + h, n);
  concat.topRows(model.node_width) = tape.x;
  concat.bottomRows(h) = tape.neighbor_sum;
  grads.w_a += d_readout_pre * concat.transpose();
  grads.b_a.col(0) += d_readout_pre.rowwise().sum();
  Eigen::MatrixXd d_concat = model.w_a.transpose() * d_readout_pre;
  Eigen::MatrixXd d_neighbor_sum = d_concat.bottomRows(h);

  // dz accumulates the gradient flowing into the current hidden state.
  Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(h, n);
  for (const auto& [src, dst] : graph.edges)
    dz.col(src) += d_neighbor_sum.col(dst);

  // --- message-passing steps, reversed ---
  for (int t = cfg.depth - 1; t >= 0; --t) {
    const auto ut = static_cast<std::size_t>(t);
    if (!tape.drop_mask.empty())
      dz.array() *= tape.drop_mask[ut].array();
    Eigen::MatrixXd d_update_pre = activation_backward(
        tape.update_pre[ut], dz, cfg.activation, slope, dslope);

    grads.w_m += d_update_pre * tape.z[ut].transpose();
    grads.w_u += d_update_pre * tape.msg[ut].transpose();
    grads.b_upd.col(0) += d_update_pre.rowwise().sum();

    Eigen::MatrixXd dz_prev = model.w_m.transpose() * d_update_pre;
    Eigen::MatrixXd d_msg = model.w_u.transpose() * d_update_pre;

    Eigen::MatrixXd d_phi(h, n_edges);
    for (Eigen::Index e = 0; e < n_edges; ++e)
      d_phi.col(e) = d_msg.col(graph.edges[static_cast<std::size_t>(e)].second);

    grads.msg_w2 += d_phi * tape.edge_act[ut].transpose();
    grads.msg_b2.col(0) += d_phi.rowwise().sum();
    Eigen::MatrixXd d_edge_act = model.msg_w2.transpose() * d_phi;
    Eigen::MatrixXd d_edge_pre = activation_backward(
        tape.edge_pre[ut], d_edge_act, cfg.activation, slope, dslope);

    // Rebuild phi's input from the stored states (cheaper than taping it).
    Eigen::MatrixXd edge_in(2 * h + model.edge_width, n_edges);
    for (Eigen::Index e = 0; e < n_edges; ++e) {
      const auto [src, dst] = graph.edges[static_cast<std::size_t>(e)];
      edge_in.col(e).head(h) = tape.z[ut].col(dst);
      edge_in.col(e).segment(h, h) = tape.z[ut].col(src);
      edge_in.col(e).tail(model.edge_width) =
          graph.edge_features.row(e).transpose();
    }
    grads.msg_w1 += d_edge_pre * edge_in.transpose();
    grads.msg_b1.col(0) += d_edge_pre.rowwise().sum();

    Eigen::MatrixXd d_edge_in = model.msg_w1.transpose() * d_edge_pre;
    for (Eigen::Index e = 0; e < n_edges; ++e) {
      const auto [src, dst] = graph.edges[static_cast<std::size_t>(e)];
      dz_prev.col(dst) += d_edge_in.col(e).head(h);
      dz_prev.col(src) += d_edge_in.col(e).segment(h, h);
    }
    dz = std::move(dz_prev);
  }

  // --- input projection ---
  grads.w_in += dz * tape.x.transpose();
  grads.b_in.col(0) += dz.rowwise().sum();

  grads.prelu_slope(0, 0) += dslope;
}

}  // namespace gmc
