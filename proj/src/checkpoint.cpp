//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "binary_io.hpp"
#include "gmc/error.hpp"

namespace gmc {

namespace {
constexpr char kMagic[4] = {'G', 'M', 'C', 'M'};
constexpr std::uint32_t kVersion = 1;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw CorruptCheckpoint("bad numeric config value '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw CorruptCheckpoint("bad integer config value '" + s + "'");
  return v;
}
}  // namespace

std::string train_config_to_text(const TrainConfig& c) {
  std::ostringstream os;
  os << "task=" << task_name(c.task) << '\n'
     << "depth=" << c.depth << '\n'
     << "message_hidden_dim=" << c.message_hidden_dim << '\n'
     << "ffn_hidden_dim=" << c.ffn_hidden_dim << '\n'
     << "ffn_num_layers=" << c.ffn_num_layers << '\n'
     << "activation=" << activation_name(c.activation) << '\n'
     << "aggregation=" << aggregation_name(c.aggregation) << '\n'
     << "aggregation_norm=" << fmt(c.aggregation_norm) << '\n'
     << "batch_size=" << c.batch_size << '\n'
     << "epochs=" << c.epochs << '\n'
     << "max_lr=" << fmt(c.max_lr) << '\n'
     << "init_lr_ratio=" << fmt(c.init_lr_ratio) << '\n'
     << "final_lr_ratio=" << fmt(c.final_lr_ratio) << '\n'
     << "warmup_epochs=" << c.warmup_epochs << '\n'
     << "dropout=" << fmt(c.dropout) << '\n'
     << "seed=" << c.seed << '\n';
  return os.str();
}

TrainConfig train_config_from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw CorruptCheckpoint("bad config line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end())
      throw CorruptCheckpoint("config block lacks key '" + key + "'");
    return it->second;
  };

  TrainConfig c;
  c.task = parse_task(need("task"));
  c.depth = to_int(need("depth"));
  c.message_hidden_dim = to_int(need("message_hidden_dim"));
  c.ffn_hidden_dim = to_int(need("ffn_hidden_dim"));
  c.ffn_num_layers = to_int(need("ffn_num_layers"));
  c.activation = parse_activation(need("activation"));
  c.aggregation = parse_aggregation(need("aggregation"));
  c.aggregation_norm = to_double(need("aggregation_norm"));
  c.batch_size = to_int(need("batch_size"));
  c.epochs = to_int(need("epochs"));
  c.max_lr = to_double(need("max_lr"));
  c.init_lr_ratio = to_double(need("init_lr_ratio"));
  c.final_lr_ratio = to_double(need("final_lr_ratio"));
  c.warmup_epochs = to_int(need("warmup_epochs"));
  c.dropout = to_double(need("dropout"));
  c.seed = static_cast<std::uint64_t>(std::stoull(need("seed")));
  return c;
}

void save_checkpoint(const ModelParams& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw CorruptCheckpoint("cannot open '" + path + "' for writing");

  os.write(kMagic, 4);
  detail::write_le<std::uint32_t>(os, kVersion);
  detail::write_string(os, train_config_to_text(model.config));
  detail::write_string(os, model.feat_fingerprint);
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(model.node_width));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(model.edge_width));

  const auto refs = model.param_refs();
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(refs.size()));
  for (const auto& [name, mat] : refs) {
    detail::write_string(os, name);
    detail::write_le<std::uint32_t>(os, 2);  // rank
    detail::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(mat->rows()));
    detail::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(mat->cols()));
    for (Eigen::Index r = 0; r < mat->rows(); ++r)
      for (Eigen::Index c = 0; c < mat->cols(); ++c)
        detail::write_le<double>(os, (*mat)(r, c));
  }
  if (!os) throw CorruptCheckpoint("short write to '" + path + "'");
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CorruptCheckpoint("cannot open '" + path + "'");

  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw CorruptCheckpoint("'" + path + "' is not a checkpoint");
  std::uint32_t version = 0;
  if (!detail::read_le(is, version))
    throw CorruptCheckpoint("truncated header in '" + path + "'");
  if (version != kVersion)
    throw VersionMismatch("checkpoint version " + std::to_string(version) +
                          ", expected " + std::to_string(kVersion));

  std::string config_text, fingerprint;
  std::uint32_t node_width = 0, edge_width = 0;
  if (!detail::read_string(is, config_text) ||
      !detail::read_string(is, fingerprint) ||
      !detail::read_le(is, node_width) || !detail::read_le(is, edge_width))
    throw CorruptCheckpoint("truncated preamble in '" + path + "'");

  const TrainConfig config = train_config_from_text(config_text);
  ModelParams model = init_model(config, config.seed,
                                 static_cast<int>(node_width),
                                 static_cast<int>(edge_width));
  model.feat_fingerprint = fingerprint;

  std::uint32_t n_arrays = 0;
  if (!detail::read_le(is, n_arrays))
    throw CorruptCheckpoint("truncated array count in '" + path + "'");
  auto refs = model.param_refs();
  if (n_arrays != refs.size())
    throw CorruptCheckpoint("checkpoint holds " + std::to_string(n_arrays) +
                            " arrays, model expects " +
                            std::to_string(refs.size()));

  for (auto& [name, mat] : refs) {
    std::string stored_name;
    std::uint32_t rank = 0;
    std::uint64_t rows = 0, cols = 0;
    if (!detail::read_string(is, stored_name) || !detail::read_le(is, rank) ||
        !detail::read_le(is, rows) || !detail::read_le(is, cols))
      throw CorruptCheckpoint("truncated array header in '" + path + "'");
    if (stored_name != name || rank != 2 ||
        rows != static_cast<std::uint64_t>(mat->rows()) ||
        cols != static_cast<std::uint64_t>(mat->cols()))
      throw CorruptCheckpoint("array '" + stored_name +
                              "' does not match the declared model shape");
    for (std::uint64_t r = 0; r < rows; ++r)
      for (std::uint64_t c = 0; c < cols; ++c)
        if (!detail::read_le(is, (*mat)(static_cast<Eigen::Index>(r),
                                        static_cast<Eigen::Index>(c))))
          throw CorruptCheckpoint("truncated array data in '" + path + "'");
  }
  return model;
}

}  // namespace gmc
