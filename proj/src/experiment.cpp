//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>

#include "gmc/checkpoint.hpp"
#include "gmc/error.hpp"
#include "gmc/hash.hpp"
#include "gmc/parallel.hpp"

namespace fs = std::filesystem;

namespace gmc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw Error("cannot write '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

struct SplitGraphs {
  std::vector<MolGraph> train, val, test;
};

SplitGraphs partition_graphs(const FeaturizedDataset& feats,
                             const SplitAssignment& split) {
  SplitGraphs out;
  for (std::size_t i = 0; i < feats.graphs.size(); ++i) {
    switch (split.partition[i]) {
      case Partition::train: out.train.push_back(feats.graphs[i]); break;
      case Partition::val: out.val.push_back(feats.graphs[i]); break;
      case Partition::test: out.test.push_back(feats.graphs[i]); break;
    }
  }
  return out;
}

std::map<std::string, double> evaluate_test(const ModelParams& model,
                                            const std::vector<MolGraph>& test,
                                            const std::string& fingerprint) {
  if (test.empty()) throw EmptyDataset("test partition is empty");
  const std::vector<double> preds = predict_batch(model, test, fingerprint);
  std::vector<double> labels;
  labels.reserve(test.size());
  for (const MolGraph& g : test) labels.push_back(g.label);

  std::map<std::string, double> metrics;
  if (model.config.task == Task::classification) {
    metrics["auc"] = auc_roc(preds, labels);
  } else {
    metrics["rmse"] = rmse(preds, labels);
    metrics["pearson"] = pearson(preds, labels);
  }
  return metrics;
}

MetricSummary summarize_or_degenerate(const std::vector<double>& values) {
  if (values.size() >= 2) return summarize(values);
  MetricSummary s;
  s.values = values;
  s.mean = values.empty() ? 0.0 : values.front();
  s.ci_lo = s.mean;
  s.ci_hi = s.mean;
  return s;
}

// Canonical description used for the run-manifest config hash.
std::string describe_config(const ExperimentConfig& config,
                            const std::string& fingerprint) {
  std::ostringstream os;
  os << "manifest=" << config.manifest_path << '\n'
     << "mol2_dir=" << config.mol2_dir << '\n'
     << "task=" << task_name(config.task) << '\n'
     << "ratios=" << fmt(config.ratios[0]) << ',' << fmt(config.ratios[1])
     << ',' << fmt(config.ratios[2]) << '\n'
     << "wcs=" << fingerprint << '\n'
     << train_config_to_text(config.train) << "seeds=";
  for (std::size_t i = 0; i < config.seeds.size(); ++i)
    os << (i ? "," : "") << config.seeds[i];
  os << '\n';
  return os.str();
}

}  // namespace

FeaturizedDataset featurize_with_cache(const std::vector<DatasetRecord>& records,
                                       const WcsParams& params,
                                       const AblationMask& mask,
                                       const std::string& cache_dir) {
  if (cache_dir.empty()) return featurize_dataset(records, params, mask);

  // Cache files are keyed by the params fingerprint plus the mask content.
  std::string key = params.fingerprint();
  for (const auto& [a, b] : mask.pairs()) key += ";mask=" + a + "-" + b;
  const fs::path path =
      fs::path(cache_dir) / ("wcs_" + to_hex(fnv1a(key)) + ".gmcf");

  if (fs::is_regular_file(path)) {
    const WcsCache cache = load_wcs_cache(path.string());
    if (cache.fingerprint != params.fingerprint())
      throw FingerprintMismatch("cache '" + path.string() +
                                "' was built with '" + cache.fingerprint +
                                "', expected '" + params.fingerprint() + "'");
    if (cache.records.size() != records.size())
      throw CorruptCache("cache '" + path.string() + "' holds " +
                         std::to_string(cache.records.size()) +
                         " records, dataset has " +
                         std::to_string(records.size()));
    FeaturizedDataset out;
    out.fingerprint = cache.fingerprint;
    out.graphs.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (cache.records[i].id != records[i].id)
        throw CorruptCache("cache record order does not match the manifest");
      out.graphs.push_back(build_molgraph(records[i].molecule,
                                          cache.records[i].features,
                                          records[i].label));
    }
    return out;
  }

  FeaturizedDataset out;
  out.fingerprint = params.fingerprint();
  std::vector<WcsCacheRecord> cache_records;
  cache_records.reserve(records.size());
  for (const DatasetRecord& rec : records) {
    WcsCacheRecord cr;
    cr.id = rec.id;
    cr.features = wcs_atom_features(rec.molecule, params, mask);
    out.graphs.push_back(build_molgraph(rec.molecule, cr.features, rec.label));
    cache_records.push_back(std::move(cr));
  }
  fs::create_directories(cache_dir);
  save_wcs_cache(path.string(), out.fingerprint, cache_records);
  return out;
}

WcsParams WcsSettings::resolve(const std::vector<DatasetRecord>& records) const {
  double s;
  if (sigma.has_value()) {
    s = *sigma;
  } else {
    std::vector<Molecule> mols;
    mols.reserve(records.size());
    for (const DatasetRecord& rec : records) mols.push_back(rec.molecule);
    s = dataset_sigma(mols, radii);
  }
  return WcsParams(kernel, kappa, tau, s, radii, with_median);
}

bool WcsSettings::operator==(const WcsSettings& other) const {
  return kernel == other.kernel && kappa == other.kappa && tau == other.tau &&
         sigma == other.sigma && with_median == other.with_median &&
         radii.entries() == other.radii.entries() &&
         radii.fallback() == other.radii.fallback();
}

ExperimentConfig::ExperimentConfig() {
  for (std::uint64_t s = 0; s <= 20; ++s) seeds.push_back(s);
}

void ExperimentConfig::validate_paths() const {
  if (!fs::is_regular_file(manifest_path))
    throw MalformedRecord("manifest '" + manifest_path + "' does not exist");
  if (!fs::is_directory(mol2_dir))
    throw MalformedRecord("mol2 directory '" + mol2_dir + "' does not exist");
}

ExperimentReport run_experiment(const ExperimentConfig& config, bool persist) {
  config.train.validate();
  if (config.seeds.empty()) throw RangeError("seed list must be non-empty");
  config.validate_paths();

  LoadedDataset loaded = load_dataset(
      config.manifest_path, config.mol2_dir,
      config.task == Task::classification ? LabelExpectation::binary
                                          : LabelExpectation::real);
  if (loaded.records.empty())
    throw EmptyDataset("no loadable records in '" + config.manifest_path + "'");

  const WcsParams params = config.wcs.resolve(loaded.records);
  const FeaturizedDataset feats = featurize_with_cache(
      loaded.records, params, AblationMask{}, config.cache_dir);

  ExperimentReport report;
  report.per_seed.resize(config.seeds.size());

  const fs::path out_dir(config.out_dir);
  parallel_for(config.seeds.size(), [&](std::size_t i) {
    SeedOutcome& outcome = report.per_seed[i];
    outcome.seed = config.seeds[i];
    try {
      const SplitAssignment split =
          scaffold_split(loaded.records, config.ratios, outcome.seed);
      SplitGraphs parts = partition_graphs(feats, split);

      TrainConfig tc = config.train;
      tc.task = config.task;
      tc.seed = outcome.seed;
      const TrainResult trained =
          train(parts.train, parts.val, tc, feats.fingerprint);

      outcome.metrics =
          evaluate_test(trained.model, parts.test, feats.fingerprint);
      outcome.ok = true;

      if (persist) {
        write_file(out_dir / "splits" /
                       ("seed_" + std::to_string(outcome.seed) + ".csv"),
                   split_to_csv(loaded.records, split));
        fs::create_directories(out_dir / "checkpoints");
        save_checkpoint(trained.model,
                        (out_dir / "checkpoints" /
                         ("seed_" + std::to_string(outcome.seed) + ".ckpt"))
                            .string());
      }
    } catch (const Error& e) {
      outcome.ok = false;
      outcome.error = e.what();
    }
  });

  std::map<std::string, std::vector<double>> by_metric;
  for (const SeedOutcome& outcome : report.per_seed)
    if (outcome.ok)
      for (const auto& [name, value] : outcome.metrics)
        by_metric[name].push_back(value);

  if (by_metric.empty()) {
    std::string detail;
    for (const SeedOutcome& outcome : report.per_seed)
      detail += "\n  seed " + std::to_string(outcome.seed) + ": " + outcome.error;
    throw FailedStudy("every seed failed:" + detail);
  }
  for (const auto& [name, values] : by_metric)
    report.summaries[name] = summarize_or_degenerate(values);

  if (persist) {
    write_file(out_dir / "metrics.csv", report_to_csv(report));
    write_file(out_dir / "run_manifest.csv",
               run_manifest_csv(config, feats.fingerprint,
                                {{"splits", (out_dir / "splits").string()},
                                 {"checkpoints",
                                  (out_dir / "checkpoints").string()},
                                 {"metrics",
                                  (out_dir / "metrics.csv").string()}}));
  }
  return report;
}

std::string run_manifest_csv(
    const ExperimentConfig& config, const std::string& featurization,
    const std::vector<std::pair<std::string, std::string>>& artifacts) {
  std::ostringstream os;
  os << "key,value\n";
  os << "config_hash," << to_hex(fnv1a(describe_config(config, featurization)))
     << '\n';
  os << "manifest_hash," << to_hex(fnv1a(read_file(config.manifest_path)))
     << '\n';
  os << "featurization," << featurization << '\n';
  for (const auto& [key, path] : artifacts) os << key << ',' << path << '\n';
  return os.str();
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "metric,seed,value\n";
  for (const SeedOutcome& outcome : report.per_seed) {
    if (!outcome.ok) {
      os << "error," << outcome.seed << ',' << outcome.error << '\n';
      continue;
    }
    for (const auto& [name, value] : outcome.metrics)
      os << name << ',' << outcome.seed << ',' << fmt(value) << '\n';
  }
  for (const auto& [name, summary] : report.summaries) {
    os << name << ",mean," << fmt(summary.mean) << '\n';
    os << name << ",std," << fmt(summary.std) << '\n';
    os << name << ",ci_lo," << fmt(summary.ci_lo) << '\n';
    os << name << ",ci_hi," << fmt(summary.ci_hi) << '\n';
  }
  return os.str();
}

// --- hyperparameter search ---------------------------------------------------

SearchAxis SearchAxis::discrete(std::string name, std::vector<std::string> choices) {
  SearchAxis axis;
  axis.name = std::move(name);
  axis.choices = std::move(choices);
  return axis;
}

SearchAxis SearchAxis::log_uniform(std::string name, double lo, double hi) {
  SearchAxis axis;
  axis.name = std::move(name);
  axis.log_range = {lo, hi};
  return axis;
}

std::vector<SearchAxis> default_search_space() {
  auto seq = [](double lo, double hi, double step) {
    std::vector<std::string> out;
    for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(fmt(v));
    return out;
  };
  std::vector<SearchAxis> space;
  space.push_back(SearchAxis::discrete(
      "activation", {"relu", "leakyrelu", "prelu", "tanh", "selu", "elu"}));
  space.push_back(SearchAxis::discrete("aggregation", {"mean", "sum", "norm"}));
  space.push_back(SearchAxis::discrete("aggregation_norm", seq(1, 200, 1)));
  space.push_back(
      SearchAxis::discrete("batch_size", {"16", "32", "64", "128", "256"}));
  space.push_back(SearchAxis::discrete("depth", seq(2, 6, 1)));
  space.push_back(SearchAxis::discrete("dropout", seq(0.0, 0.45, 0.05)));
  space.push_back(SearchAxis::discrete("ffn_hidden_dim", seq(300, 2400, 100)));
  space.push_back(SearchAxis::discrete("ffn_num_layers", seq(1, 3, 1)));
  space.push_back(SearchAxis::log_uniform("final_lr_ratio", 1e-2, 1.0));
  space.push_back(SearchAxis::discrete("message_hidden_dim", seq(300, 2400, 100)));
  space.push_back(SearchAxis::log_uniform("init_lr_ratio", 1e-2, 1.0));
  space.push_back(SearchAxis::log_uniform("max_lr", 1e-4, 1e-2));
  space.push_back(SearchAxis::discrete("kernel", {"exponential", "lorentz"}));
  space.push_back(SearchAxis::discrete("tau", seq(0.5, 10.0, 0.5)));
  space.push_back(SearchAxis::discrete("kappa", seq(0.5, 20.0, 0.5)));
  return space;
}

namespace {

double axis_double(const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw TypeError("bad numeric value '" + value + "'");
    return v;
  } catch (const std::exception&) {
    throw TypeError("bad numeric value '" + value + "'");
  }
}

void apply_axis(ExperimentConfig& config, const std::string& name,
                const std::string& value) {
  TrainConfig& t = config.train;
  if (name == "activation") t.activation = parse_activation(value);
  else if (name == "aggregation") t.aggregation = parse_aggregation(value);
  else if (name == "aggregation_norm") t.aggregation_norm = axis_double(value);
  else if (name == "batch_size") t.batch_size = static_cast<int>(axis_double(value));
  else if (name == "depth") t.depth = static_cast<int>(axis_double(value));
  else if (name == "dropout") t.dropout = axis_double(value);
  else if (name == "ffn_hidden_dim") t.ffn_hidden_dim = static_cast<int>(axis_double(value));
  else if (name == "ffn_num_layers") t.ffn_num_layers = static_cast<int>(axis_double(value));
  else if (name == "final_lr_ratio") t.final_lr_ratio = axis_double(value);
  else if (name == "message_hidden_dim") t.message_hidden_dim = static_cast<int>(axis_double(value));
  else if (name == "init_lr_ratio") t.init_lr_ratio = axis_double(value);
  else if (name == "max_lr") t.max_lr = axis_double(value);
  else if (name == "kernel")
    config.wcs.kernel = value == "lorentz" || value == "Lorentz"
                            ? KernelKind::lorentz
                            : KernelKind::exponential;
  else if (name == "tau") config.wcs.tau = axis_double(value);
  else if (name == "kappa") config.wcs.kappa = axis_double(value);
  else throw UnknownKey("unknown search axis '" + name + "'");
}

// Fingerprint-keyed featurization cache shared by concurrent candidate jobs.
class FeatureCache {
 public:
  std::shared_ptr<const FeaturizedDataset> get(
      const std::vector<DatasetRecord>& records, const WcsParams& params) {
    const std::string fp = params.fingerprint();
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = items_.find(fp);
      if (it != items_.end()) return it->second;
    }
    auto feats = std::make_shared<const FeaturizedDataset>(
        featurize_dataset(records, params));
    std::lock_guard<std::mutex> lock(mu_);
    return items_.try_emplace(fp, std::move(feats)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const FeaturizedDataset>> items_;
};

// Validation score of one candidate on a fixed split; higher is better.
double candidate_score(const ExperimentConfig& candidate,
                       const std::vector<DatasetRecord>& records,
                       const SplitAssignment& split, FeatureCache& cache) {
  const WcsParams params = candidate.wcs.resolve(records);
  const auto feats = cache.get(records, params);

  SplitGraphs parts = partition_graphs(*feats, split);
  TrainConfig tc = candidate.train;
  tc.task = candidate.task;
  tc.seed = candidate.seeds.front();
  const TrainResult trained =
      train(parts.train, parts.val, tc, feats->fingerprint);
  return validation_score(trained.model, parts.val);
}

}  // namespace

GridSearchResult grid_search(const std::vector<SearchAxis>& space,
                             const ExperimentConfig& base,
                             const std::vector<DatasetRecord>& records,
                             int budget, std::uint64_t seed) {
  if (space.empty()) throw EmptySpace("search space has no axes");
  for (const SearchAxis& axis : space)
    if (!axis.log_range.has_value() && axis.choices.empty())
      throw EmptySpace("axis '" + axis.name + "' has no values");
  if (budget < 1) throw RangeError("budget must be >= 1");
  if (records.empty()) throw EmptyDataset("grid search needs records");

  // Candidate assignments, one value per axis.
  std::vector<std::vector<std::string>> candidates;
  bool all_discrete = true;
  long product = 1;
  for (const SearchAxis& axis : space) {
    if (axis.log_range.has_value()) {
      all_discrete = false;
      break;
    }
    product *= static_cast<long>(axis.choices.size());
    if (product > budget) break;  // cross-product already too large
  }

  if (all_discrete && product <= budget) {
    // Full cross-product, lexicographic in axis order.
    candidates.push_back({});
    for (const SearchAxis& axis : space) {
      std::vector<std::vector<std::string>> expanded;
      for (const auto& partial : candidates)
        for (const std::string& value : axis.choices) {
          auto next = partial;
          next.push_back(value);
          expanded.push_back(std::move(next));
        }
      candidates = std::move(expanded);
    }
  } else {
    rng::Engine eng(rng::derive(seed, 0x6b));
    for (int b = 0; b < budget; ++b) {
      std::vector<std::string> assignment;
      for (const SearchAxis& axis : space) {
        if (axis.log_range.has_value()) {
          const double v = std::exp(rng::uniform(eng, std::log(axis.log_range->first),
                                                 std::log(axis.log_range->second)));
          assignment.push_back(fmt(v));
        } else {
          assignment.push_back(
              axis.choices[rng::below(eng, axis.choices.size())]);
        }
      }
      candidates.push_back(std::move(assignment));
    }
  }

  const SplitAssignment split =
      scaffold_split(records, base.ratios, base.seeds.front());
  FeatureCache cache;

  // Materialize candidate configs up front (axis errors are caller bugs and
  // should not surface as job failures), then score them on the pool.
  std::vector<ExperimentConfig> configs;
  std::vector<std::string> labels;
  for (const auto& assignment : candidates) {
    ExperimentConfig candidate = base;
    std::ostringstream label;
    for (std::size_t a = 0; a < space.size(); ++a) {
      apply_axis(candidate, space[a].name, assignment[a]);
      label << (a ? ";" : "") << space[a].name << '=' << assignment[a];
    }
    configs.push_back(std::move(candidate));
    labels.push_back(label.str());
  }

  std::vector<double> internal_scores(
      configs.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(configs.size(), [&](std::size_t i) {
    try {
      internal_scores[i] = candidate_score(configs[i], records, split, cache);
    } catch (const Error&) {
      // diverged or otherwise failed candidates stay NaN
    }
  });

  GridSearchResult result;
  result.best = base;
  double best_internal = -std::numeric_limits<double>::infinity();
  bool any_ok = false;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const double internal = internal_scores[i];
    if (std::isnan(internal)) {
      result.evaluated.emplace_back(labels[i],
                                    std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double reported =
        base.task == Task::classification ? internal : -internal;
    result.evaluated.emplace_back(labels[i], reported);
    if (internal > best_internal) {
      best_internal = internal;
      result.best = configs[i];
      result.best_score = reported;
      any_ok = true;
    }
  }
  if (!any_ok) throw FailedStudy("every grid-search candidate failed");
  return result;
}

// --- kernel sweep --------------------------------------------------------------

std::vector<SweepPoint> enumerate_sweep(const std::vector<double>& tau_grid,
                                        const std::vector<double>& kappa_grid,
                                        const std::vector<KernelKind>& kinds) {
  std::vector<SweepPoint> points;
  points.reserve(tau_grid.size() * kappa_grid.size() * kinds.size());
  std::vector<KernelKind> sorted_kinds = kinds;
  std::sort(sorted_kinds.begin(), sorted_kinds.end());
  std::vector<double> sorted_kappa = kappa_grid, sorted_tau = tau_grid;
  std::sort(sorted_kappa.begin(), sorted_kappa.end());
  std::sort(sorted_tau.begin(), sorted_tau.end());
  for (KernelKind kind : sorted_kinds)
    for (double kappa : sorted_kappa)
      for (double tau : sorted_tau) points.push_back({kind, kappa, tau});
  return points;
}

SweepResult kernel_sweep(const ExperimentConfig& base,
                         const std::vector<DatasetRecord>& records,
                         const std::vector<double>& tau_grid,
                         const std::vector<double>& kappa_grid,
                         const std::vector<KernelKind>& kinds) {
  if (tau_grid.empty() || kappa_grid.empty() || kinds.empty())
    throw EmptySpace("kernel sweep grids must be non-empty");
  if (records.empty()) throw EmptyDataset("kernel sweep needs records");

  const std::vector<SweepPoint> points =
      enumerate_sweep(tau_grid, kappa_grid, kinds);
  const SplitAssignment split =
      scaffold_split(records, base.ratios, base.seeds.front());
  FeatureCache cache;

  std::vector<double> internal_scores(
      points.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(points.size(), [&](std::size_t i) {
    ExperimentConfig candidate = base;
    candidate.wcs.kernel = points[i].kernel;
    candidate.wcs.kappa = points[i].kappa;
    candidate.wcs.tau = points[i].tau;
    try {
      internal_scores[i] = candidate_score(candidate, records, split, cache);
    } catch (const Error&) {
    }
  });

  SweepResult result;
  double best_internal = -std::numeric_limits<double>::infinity();
  bool any_ok = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double internal = internal_scores[i];
    if (std::isnan(internal)) {
      result.evaluated.emplace_back(points[i],
                                    std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double reported =
        base.task == Task::classification ? internal : -internal;
    result.evaluated.emplace_back(points[i], reported);
    // strict comparison: ties keep the lexicographically earlier point
    if (internal > best_internal) {
      best_internal = internal;
      ExperimentConfig winner = base;
      winner.wcs.kernel = points[i].kernel;
      winner.wcs.kappa = points[i].kappa;
      winner.wcs.tau = points[i].tau;
      result.best = winner.wcs.resolve(records);
      result.best_score = reported;
      any_ok = true;
    }
  }
  if (!any_ok) throw FailedStudy("every kernel-sweep point failed");
  return result;
}

// --- ablation --------------------------------------------------------------------

std::int64_t pair_frequency(const std::vector<DatasetRecord>& records,
                            const std::pair<std::string, std::string>& pair,
                            const WcsParams& params) {
  std::int64_t count = 0;
  for (const DatasetRecord& rec : records) {
    const Molecule& mol = rec.molecule;
    std::set<std::pair<int, int>> bonded;
    for (const Bond& bond : mol.bonds)
      bonded.insert(std::minmax(bond.a, bond.b));
    for (int i = 0; i < mol.atom_count(); ++i) {
      for (int j = i + 1; j < mol.atom_count(); ++j) {
        const std::string& ta = mol.atoms[static_cast<std::size_t>(i)].sybyl_type;
        const std::string& tb = mol.atoms[static_cast<std::size_t>(j)].sybyl_type;
        const bool match = (ta == pair.first && tb == pair.second) ||
                           (ta == pair.second && tb == pair.first);
        if (!match) continue;
        if (bonded.count(std::minmax(i, j))) continue;
        const double cutoff =
            params.radii.radius(mol.atoms[static_cast<std::size_t>(i)].element) +
            params.radii.radius(mol.atoms[static_cast<std::size_t>(j)].element) +
            params.sigma;
        if (mol.distance(i, j) < cutoff) continue;
        ++count;
      }
    }
  }
  return count;
}

std::vector<AblationResult> ablation_study(
    const ExperimentConfig& config, const std::vector<DatasetRecord>& records,
    int n_seeds) {
  if (config.task != Task::classification)
    throw RangeError("ablation studies are defined on classification tasks");
  if (records.empty()) throw EmptyDataset("ablation study needs records");
  if (n_seeds < 1) throw RangeError("n_seeds must be >= 1");
  if (static_cast<int>(config.seeds.size()) < n_seeds)
    throw RangeError("seed list holds fewer than n_seeds entries");

  std::vector<std::pair<std::string, std::string>> pairs = config.ablation_pairs;
  const WcsParams params = config.wcs.resolve(records);

  // SYBYL-type inventory of the dataset.
  std::set<std::string> inventory;
  for (const DatasetRecord& rec : records)
    for (const Atom& atom : rec.molecule.atoms)
      inventory.insert(atom.sybyl_type);

  if (pairs.empty() && config.pair_frequency_floor > 0) {
    // All pairs at or above the frequency floor, lexicographic order.
    std::map<std::pair<std::string, std::string>, std::int64_t> freq;
    for (const DatasetRecord& rec : records) {
      const Molecule& mol = rec.molecule;
      std::set<std::pair<int, int>> bonded;
      for (const Bond& bond : mol.bonds)
        bonded.insert(std::minmax(bond.a, bond.b));
      for (int i = 0; i < mol.atom_count(); ++i)
        for (int j = i + 1; j < mol.atom_count(); ++j) {
          if (bonded.count(std::minmax(i, j))) continue;
          const double cutoff =
              params.radii.radius(mol.atoms[static_cast<std::size_t>(i)].element) +
              params.radii.radius(mol.atoms[static_cast<std::size_t>(j)].element) +
              params.sigma;
          if (mol.distance(i, j) < cutoff) continue;
          auto key = std::minmax(mol.atoms[static_cast<std::size_t>(i)].sybyl_type,
                                 mol.atoms[static_cast<std::size_t>(j)].sybyl_type);
          ++freq[key];
        }
    }
    for (const auto& [key, count] : freq)
      if (count >= config.pair_frequency_floor) pairs.push_back(key);
  }
  if (pairs.empty()) return {};

  for (const auto& [a, b] : pairs) {
    if (!inventory.count(a))
      throw UnknownSybylType("SYBYL type '" + a + "' absent from the dataset");
    if (!inventory.count(b))
      throw UnknownSybylType("SYBYL type '" + b + "' absent from the dataset");
  }

  const std::vector<std::uint64_t> seeds(config.seeds.begin(),
                                         config.seeds.begin() + n_seeds);

  // One arm = one featurization; per seed the split and init seed are shared
  // with the baseline arm.
  auto run_arm = [&](const AblationMask& mask) {
    const FeaturizedDataset feats = featurize_dataset(records, params, mask);
    std::vector<double> aucs(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
      const SplitAssignment split =
          scaffold_split(records, config.ratios, seeds[i]);
      SplitGraphs parts = partition_graphs(feats, split);
      TrainConfig tc = config.train;
      tc.task = Task::classification;
      tc.seed = seeds[i];
      const TrainResult trained =
          train(parts.train, parts.val, tc, feats.fingerprint);
      aucs[i] = evaluate_test(trained.model, parts.test,
                              feats.fingerprint)["auc"];
    });
    return aucs;
  };

  const std::vector<double> baseline = run_arm(AblationMask{});

  std::vector<AblationResult> results;
  results.reserve(pairs.size());
  for (const auto& pair : pairs) {
    AblationResult res;
    res.pair = pair;
    res.baseline_auc = baseline;
    res.ablated_auc = run_arm(AblationMask{{pair}});
    std::vector<double> delta(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
      delta[i] = res.ablated_auc[i] - res.baseline_auc[i];
    res.delta_auc = summarize_or_degenerate(delta);
    res.frequency = pair_frequency(records, pair, params);
    results.push_back(std::move(res));
  }
  return results;
}

std::string ablation_to_csv(const std::vector<AblationResult>& results) {
  std::ostringstream os;
  os << "pair,seed_index,baseline_auc,ablated_auc,delta\n";
  for (const AblationResult& res : results) {
    const std::string pair_label = res.pair.first + "-" + res.pair.second;
    for (std::size_t i = 0; i < res.baseline_auc.size(); ++i)
      os << pair_label << ',' << i << ',' << fmt(res.baseline_auc[i]) << ','
         << fmt(res.ablated_auc[i]) << ',' << fmt(res.delta_auc.values[i])
         << '\n';
    os << pair_label << ",mean,,," << fmt(res.delta_auc.mean) << '\n';
    os << pair_label << ",ci_lo,,," << fmt(res.delta_auc.ci_lo) << '\n';
    os << pair_label << ",ci_hi,,," << fmt(res.delta_auc.ci_hi) << '\n';
    os << pair_label << ",frequency,,," << res.frequency << '\n';
  }
  return os.str();
}

}  // namespace gmc
