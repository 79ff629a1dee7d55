//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gmc/error.hpp"

namespace gmc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string nearest(const std::string& key,
                    const std::vector<std::string>& known) {
  std::string best;
  std::size_t best_d = static_cast<std::size_t>(-1);
  for (const std::string& candidate : known) {
    const std::size_t d = edit_distance(key, candidate);
    if (d < best_d) {
      best_d = d;
      best = candidate;
    }
  }
  return best;
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"dataset", {"manifest", "mol2_dir", "task"}},
      {"wcs",
       {"kernel", "kappa", "tau", "sigma", "median", "radii",
        "fallback_radius"}},
      {"model",
       {"depth", "message_hidden_dim", "ffn_hidden_dim", "ffn_num_layers",
        "activation", "aggregation", "aggregation_norm", "dropout"}},
      {"train",
       {"batch_size", "epochs", "max_lr", "init_lr_ratio", "final_lr_ratio",
        "warmup_epochs", "seed"}},
      {"study",
       {"seeds", "pairs", "out", "cache", "budget", "hpo_axes",
        "pair_frequency_floor", "tau_grid", "kappa_grid", "kernels",
        "ratios"}},
  };
  return keys;
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::exception();
    return v;
  } catch (const std::exception&) {
    throw TypeError("[" + section + "] " + key + " = '" + value +
                    "' is not a number");
  }
}

int parse_int(const std::string& section, const std::string& key,
              const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::exception();
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw TypeError("[" + section + "] " + key + " = '" + value +
                    "' is not an integer");
  }
}

bool parse_bool(const std::string& section, const std::string& key,
                const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw TypeError("[" + section + "] " + key + " = '" + value +
                  "' is not a boolean");
}

void check_range(const std::string& key, double value, double lo, double hi) {
  if (value < lo || value > hi)
    throw RangeError(key + " = " + fmt(value) + " outside [" + fmt(lo) + ", " +
                     fmt(hi) + "]");
}

}  // namespace

std::vector<std::uint64_t> parse_seed_spec(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  const std::size_t dots = spec.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = std::stoull(trim(spec.substr(0, dots)));
    const std::uint64_t hi = std::stoull(trim(spec.substr(dots + 2)));
    if (hi < lo) throw RangeError("seed range '" + spec + "' is descending");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::istringstream is(spec);
  std::string token;
  while (std::getline(is, token, ',')) {
    token = trim(token);
    if (!token.empty()) seeds.push_back(std::stoull(token));
  }
  if (seeds.empty()) throw TypeError("empty seed spec '" + spec + "'");
  return seeds;
}

std::vector<std::pair<std::string, std::string>> parse_pair_list(
    const std::string& spec) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream is(spec);
  std::string token;
  while (std::getline(is, token, ',')) {
    token = trim(token);
    if (token.empty()) continue;
    const std::size_t dash = token.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == token.size())
      throw TypeError("pair '" + token + "' is not of the form A-B");
    pairs.emplace_back(trim(token.substr(0, dash)), trim(token.substr(dash + 1)));
  }
  return pairs;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    std::istringstream is(spec);
    std::string lo_s, step_s, hi_s;
    if (!std::getline(is, lo_s, ':') || !std::getline(is, step_s, ':') ||
        !std::getline(is, hi_s))
      throw TypeError("grid spec '" + spec + "' is not lo:step:hi");
    const double lo = std::stod(trim(lo_s));
    const double step = std::stod(trim(step_s));
    const double hi = std::stod(trim(hi_s));
    if (!(step > 0.0)) throw RangeError("grid step must be > 0");
    for (double v = lo; v <= hi + 1e-9; v += step) grid.push_back(v);
    return grid;
  }
  std::istringstream is(spec);
  std::string token;
  while (std::getline(is, token, ',')) {
    token = trim(token);
    if (!token.empty()) grid.push_back(std::stod(token));
  }
  if (grid.empty()) throw TypeError("empty grid spec '" + spec + "'");
  return grid;
}

FullConfig parse_config(const std::string& text) {
  FullConfig config;
  ExperimentConfig& exp = config.experiment;

  std::map<std::string, double> custom_radii;
  double fallback_radius = RadiiTable::bondi().fallback();
  bool radii_customized = false;

  std::istringstream is(text);
  std::string line, section;
  int line_no = 0;
  std::vector<std::string> sections;
  for (const auto& [name, keys] : known_keys()) sections.push_back(name);

  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw TypeError("line " + std::to_string(line_no) +
                        ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_keys().count(section))
        throw UnknownKey("unknown section [" + section + "], did you mean [" +
                         nearest(section, sections) + "]?");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw TypeError("line " + std::to_string(line_no) +
                      ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw UnknownKey("key '" + key + "' appears before any section header");

    const auto& keys = known_keys().at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw UnknownKey("unknown key '" + key + "' in [" + section +
                       "], did you mean '" + nearest(key, keys) + "'?");

    if (section == "dataset") {
      if (key == "manifest") exp.manifest_path = value;
      else if (key == "mol2_dir") exp.mol2_dir = value;
      else if (key == "task") exp.task = parse_task(value);
    } else if (section == "wcs") {
      if (key == "kernel") {
        const std::string v = value;
        if (v == "Exponential" || v == "exponential" || v == "E")
          exp.wcs.kernel = KernelKind::exponential;
        else if (v == "Lorentz" || v == "lorentz" || v == "L")
          exp.wcs.kernel = KernelKind::lorentz;
        else
          throw TypeError("kernel '" + value + "' is not Exponential/Lorentz");
      } else if (key == "kappa") {
        exp.wcs.kappa = parse_double(section, key, value);
        check_range("kappa", exp.wcs.kappa, 0.5, 20.0);
      } else if (key == "tau") {
        exp.wcs.tau = parse_double(section, key, value);
        check_range("tau", exp.wcs.tau, 0.5, 10.0);
      } else if (key == "sigma") {
        if (value == "auto") exp.wcs.sigma.reset();
        else {
          exp.wcs.sigma = parse_double(section, key, value);
          if (*exp.wcs.sigma < 0.0)
            throw RangeError("sigma must be >= 0");
        }
      } else if (key == "median") {
        exp.wcs.with_median = parse_bool(section, key, value);
      } else if (key == "radii") {
        std::istringstream rs(value);
        std::string entry;
        while (std::getline(rs, entry, ',')) {
          entry = trim(entry);
          const std::size_t colon = entry.find(':');
          if (colon == std::string::npos)
            throw TypeError("radii entry '" + entry + "' is not El:value");
          custom_radii[trim(entry.substr(0, colon))] =
              parse_double(section, key, trim(entry.substr(colon + 1)));
        }
        radii_customized = true;
      } else if (key == "fallback_radius") {
        fallback_radius = parse_double(section, key, value);
        radii_customized = true;
      }
    } else if (section == "model") {
      TrainConfig& t = exp.train;
      if (key == "depth") {
        t.depth = parse_int(section, key, value);
        check_range("depth", t.depth, 2, 6);
      } else if (key == "message_hidden_dim") {
        t.message_hidden_dim = parse_int(section, key, value);
        check_range("message_hidden_dim", t.message_hidden_dim, 1, 2400);
      } else if (key == "ffn_hidden_dim") {
        t.ffn_hidden_dim = parse_int(section, key, value);
        check_range("ffn_hidden_dim", t.ffn_hidden_dim, 1, 2400);
      } else if (key == "ffn_num_layers") {
        t.ffn_num_layers = parse_int(section, key, value);
        check_range("ffn_num_layers", t.ffn_num_layers, 1, 3);
      } else if (key == "activation") {
        t.activation = parse_activation(value);
      } else if (key == "aggregation") {
        t.aggregation = parse_aggregation(value);
      } else if (key == "aggregation_norm") {
        t.aggregation_norm = parse_double(section, key, value);
        check_range("aggregation_norm", t.aggregation_norm, 1.0, 200.0);
      } else if (key == "dropout") {
        t.dropout = parse_double(section, key, value);
        check_range("dropout", t.dropout, 0.0, 0.45);
      }
    } else if (section == "train") {
      TrainConfig& t = exp.train;
      if (key == "batch_size") {
        t.batch_size = parse_int(section, key, value);
        static constexpr int allowed[] = {16, 32, 64, 128, 256};
        if (std::find(std::begin(allowed), std::end(allowed), t.batch_size) ==
            std::end(allowed))
          throw RangeError("batch_size must be one of 16, 32, 64, 128, 256");
      } else if (key == "epochs") {
        t.epochs = parse_int(section, key, value);
        if (t.epochs < 1) throw RangeError("epochs must be >= 1");
      } else if (key == "max_lr") {
        t.max_lr = parse_double(section, key, value);
        check_range("max_lr", t.max_lr, 1e-4, 1e-2);
      } else if (key == "init_lr_ratio") {
        t.init_lr_ratio = parse_double(section, key, value);
        check_range("init_lr_ratio", t.init_lr_ratio, 0.0, 1.0);
        if (t.init_lr_ratio <= 0.0) throw RangeError("init_lr_ratio must be > 0");
      } else if (key == "final_lr_ratio") {
        t.final_lr_ratio = parse_double(section, key, value);
        check_range("final_lr_ratio", t.final_lr_ratio, 0.0, 1.0);
        if (t.final_lr_ratio <= 0.0)
          throw RangeError("final_lr_ratio must be > 0");
      } else if (key == "warmup_epochs") {
        t.warmup_epochs = parse_int(section, key, value);
        if (t.warmup_epochs < 0) throw RangeError("warmup_epochs must be >= 0");
      } else if (key == "seed") {
        t.seed = static_cast<std::uint64_t>(
            std::stoull(value));
      }
    } else if (section == "study") {
      if (key == "seeds") exp.seeds = parse_seed_spec(value);
      else if (key == "pairs") exp.ablation_pairs = parse_pair_list(value);
      else if (key == "out") exp.out_dir = value;
      else if (key == "cache") exp.cache_dir = value;
      else if (key == "budget") {
        config.budget = parse_int(section, key, value);
        if (config.budget < 1) throw RangeError("budget must be >= 1");
      } else if (key == "hpo_axes") {
        config.hpo_axes.clear();
        std::istringstream as(value);
        std::string token;
        while (std::getline(as, token, ','))
          if (!trim(token).empty()) config.hpo_axes.push_back(trim(token));
      } else if (key == "pair_frequency_floor") {
        exp.pair_frequency_floor = parse_int(section, key, value);
        if (exp.pair_frequency_floor < 0)
          throw RangeError("pair_frequency_floor must be >= 0");
      } else if (key == "tau_grid") {
        config.tau_grid = parse_grid_spec(value);
      } else if (key == "kappa_grid") {
        config.kappa_grid = parse_grid_spec(value);
      } else if (key == "kernels") {
        config.kernels.clear();
        std::istringstream ks(value);
        std::string token;
        while (std::getline(ks, token, ',')) {
          token = trim(token);
          if (token == "Exponential" || token == "exponential" || token == "E")
            config.kernels.push_back(KernelKind::exponential);
          else if (token == "Lorentz" || token == "lorentz" || token == "L")
            config.kernels.push_back(KernelKind::lorentz);
          else if (!token.empty())
            throw TypeError("kernel '" + token + "' is not Exponential/Lorentz");
        }
      } else if (key == "ratios") {
        const std::vector<double> r = parse_grid_spec(value);
        if (r.size() != 3)
          throw TypeError("ratios must hold three values");
        exp.ratios = {r[0], r[1], r[2]};
        if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9)
          throw RangeError("ratios must sum to 1");
      }
    }
  }

  if (radii_customized) {
    std::map<std::string, double> radii = RadiiTable::bondi().entries();
    for (const auto& [el, r] : custom_radii) radii[el] = r;
    exp.wcs.radii = RadiiTable(radii, fallback_radius);
  }
  return config;
}

std::string dump_config(const FullConfig& config) {
  const ExperimentConfig& exp = config.experiment;
  std::ostringstream os;

  os << "[dataset]\n";
  os << "manifest = " << exp.manifest_path << '\n';
  os << "mol2_dir = " << exp.mol2_dir << '\n';
  os << "task = " << task_name(exp.task) << '\n';

  os << "\n[wcs]\n";
  os << "kernel = " << (exp.wcs.kernel == KernelKind::exponential
                            ? "Exponential"
                            : "Lorentz")
     << '\n';
  os << "kappa = " << fmt(exp.wcs.kappa) << '\n';
  os << "tau = " << fmt(exp.wcs.tau) << '\n';
  os << "sigma = " << (exp.wcs.sigma ? fmt(*exp.wcs.sigma) : "auto") << '\n';
  os << "median = " << (exp.wcs.with_median ? "true" : "false") << '\n';
  const bool custom_radii =
      !(exp.wcs.radii.entries() == RadiiTable::bondi().entries() &&
        exp.wcs.radii.fallback() == RadiiTable::bondi().fallback());
  if (custom_radii) {
    os << "radii = ";
    bool first = true;
    for (const auto& [el, r] : exp.wcs.radii.entries()) {
      os << (first ? "" : ",") << el << ':' << fmt(r);
      first = false;
    }
    os << '\n';
    os << "fallback_radius = " << fmt(exp.wcs.radii.fallback()) << '\n';
  }

  const TrainConfig& t = exp.train;
  os << "\n[model]\n";
  os << "depth = " << t.depth << '\n';
  os << "message_hidden_dim = " << t.message_hidden_dim << '\n';
  os << "ffn_hidden_dim = " << t.ffn_hidden_dim << '\n';
  os << "ffn_num_layers = " << t.ffn_num_layers << '\n';
  os << "activation = " << activation_name(t.activation) << '\n';
  os << "aggregation = " << aggregation_name(t.aggregation) << '\n';
  os << "aggregation_norm = " << fmt(t.aggregation_norm) << '\n';
  os << "dropout = " << fmt(t.dropout) << '\n';

  os << "\n[train]\n";
  os << "batch_size = " << t.batch_size << '\n';
  os << "epochs = " << t.epochs << '\n';
  os << "max_lr = " << fmt(t.max_lr) << '\n';
  os << "init_lr_ratio = " << fmt(t.init_lr_ratio) << '\n';
  os << "final_lr_ratio = " << fmt(t.final_lr_ratio) << '\n';
  os << "warmup_epochs = " << t.warmup_epochs << '\n';
  os << "seed = " << t.seed << '\n';

  os << "\n[study]\n";
  // contiguous seed lists dump as a range
  bool contiguous = !exp.seeds.empty();
  for (std::size_t i = 1; i < exp.seeds.size(); ++i)
    if (exp.seeds[i] != exp.seeds[i - 1] + 1) contiguous = false;
  os << "seeds = ";
  if (contiguous && exp.seeds.size() > 1)
    os << exp.seeds.front() << ".." << exp.seeds.back();
  else
    for (std::size_t i = 0; i < exp.seeds.size(); ++i)
      os << (i ? "," : "") << exp.seeds[i];
  os << '\n';
  if (!exp.ablation_pairs.empty()) {
    os << "pairs = ";
    for (std::size_t i = 0; i < exp.ablation_pairs.size(); ++i)
      os << (i ? "," : "") << exp.ablation_pairs[i].first << '-'
         << exp.ablation_pairs[i].second;
    os << '\n';
  }
  os << "out = " << exp.out_dir << '\n';
  if (!exp.cache_dir.empty()) os << "cache = " << exp.cache_dir << '\n';
  os << "budget = " << config.budget << '\n';
  if (!config.hpo_axes.empty()) {
    os << "hpo_axes = ";
    for (std::size_t i = 0; i < config.hpo_axes.size(); ++i)
      os << (i ? "," : "") << config.hpo_axes[i];
    os << '\n';
  }
  if (exp.pair_frequency_floor > 0)
    os << "pair_frequency_floor = " << exp.pair_frequency_floor << '\n';
  if (!config.tau_grid.empty()) {
    os << "tau_grid = ";
    for (std::size_t i = 0; i < config.tau_grid.size(); ++i)
      os << (i ? "," : "") << fmt(config.tau_grid[i]);
    os << '\n';
  }
  if (!config.kappa_grid.empty()) {
    os << "kappa_grid = ";
    for (std::size_t i = 0; i < config.kappa_grid.size(); ++i)
      os << (i ? "," : "") << fmt(config.kappa_grid[i]);
    os << '\n';
  }
  os << "kernels = ";
  for (std::size_t i = 0; i < config.kernels.size(); ++i)
    os << (i ? "," : "")
       << (config.kernels[i] == KernelKind::exponential ? "Exponential"
                                                        : "Lorentz");
  os << '\n';
  return os.str();
}

FullConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gmc
