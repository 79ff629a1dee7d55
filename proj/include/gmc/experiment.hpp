//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmc/chem_io.hpp"
#include "gmc/metrics.hpp"
#include "gmc/model.hpp"
#include "gmc/scaffold.hpp"
#include "gmc/train.hpp"
#include "gmc/wcs.hpp"

namespace gmc {

// Kernel settings as configured; sigma is frozen from the dataset when not
// given explicitly.
struct WcsSettings {
  KernelKind kernel = KernelKind::exponential;
  double kappa = 1.0;
  double tau = 1.0;
  std::optional<double> sigma;  // nullopt -> dataset_sigma at featurization
  bool with_median = false;
  RadiiTable radii = RadiiTable::bondi();

  WcsParams resolve(const std::vector<DatasetRecord>& records) const;
  bool operator==(const WcsSettings& other) const;
};

struct ExperimentConfig {
  std::string manifest_path;
  std::string mol2_dir;
  std::string out_dir = "runs";
  std::string cache_dir;  // optional: reuse/persist featurization caches here
  Task task = Task::classification;
  TrainConfig train;
  WcsSettings wcs;
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
  std::vector<std::uint64_t> seeds;  // default 0..20
  std::vector<std::pair<std::string, std::string>> ablation_pairs;
  int pair_frequency_floor = 0;  // >0: ablate every pair at least this common

  ExperimentConfig();
  void validate_paths() const;  // throws before any training when unresolvable
  bool operator==(const ExperimentConfig&) const = default;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::map<std::string, double> metrics;  // auc | rmse, pearson
};

struct ExperimentReport {
  std::vector<SeedOutcome> per_seed;
  std::map<std::string, MetricSummary> summaries;
};

// Full multi-seed pipeline: scaffold split, featurize, train, evaluate on
// the test partition, aggregate. Per-seed failures are recorded and the run
// continues; throws FailedStudy only when every seed fails. Artifacts (split
// files, checkpoints, metrics report) land under config.out_dir when
// `persist`.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                bool persist = true);

// Featurizes records, going through a fingerprint-keyed cache file under
// cache_dir when one is configured.
FeaturizedDataset featurize_with_cache(const std::vector<DatasetRecord>& records,
                                       const WcsParams& params,
                                       const AblationMask& mask,
                                       const std::string& cache_dir);

std::string report_to_csv(const ExperimentReport& report);

// key,value rows: config hash, input hashes, featurization fingerprint and
// artifact paths. Written next to every study report.
std::string run_manifest_csv(
    const ExperimentConfig& config, const std::string& featurization,
    const std::vector<std::pair<std::string, std::string>>& artifacts);

// --- hyperparameter search -------------------------------------------------

struct SearchAxis {
  std::string name;
  std::vector<std::string> choices;          // discrete axis
  std::optional<std::pair<double, double>> log_range;  // continuous axis

  static SearchAxis discrete(std::string name, std::vector<std::string> choices);
  static SearchAxis log_uniform(std::string name, double lo, double hi);
};

// The published search space over every supported axis.
std::vector<SearchAxis> default_search_space();

struct GridSearchResult {
  ExperimentConfig best;
  double best_score = 0.0;  // validation AUC (max) or RMSE (min)
  std::vector<std::pair<std::string, double>> evaluated;  // label -> score
};

// Evaluates `budget` candidate configs on the validation split of
// base.seeds.front(): the full cross-product when it fits the budget and
// every axis is discrete, otherwise a deterministic uniform subsample.
GridSearchResult grid_search(const std::vector<SearchAxis>& space,
                             const ExperimentConfig& base,
                             const std::vector<DatasetRecord>& records,
                             int budget, std::uint64_t seed);

// --- kernel-parameter sweep --------------------------------------------------

struct SweepPoint {
  KernelKind kernel;
  double kappa;
  double tau;
};

// Lexicographic enumeration by (kernel, kappa, tau); the sweep's tie-break
// follows this order.
std::vector<SweepPoint> enumerate_sweep(const std::vector<double>& tau_grid,
                                        const std::vector<double>& kappa_grid,
                                        const std::vector<KernelKind>& kinds);

struct SweepResult {
  WcsParams best;
  double best_score = 0.0;
  std::vector<std::pair<SweepPoint, double>> evaluated;
};

SweepResult kernel_sweep(const ExperimentConfig& base,
                         const std::vector<DatasetRecord>& records,
                         const std::vector<double>& tau_grid,
                         const std::vector<double>& kappa_grid,
                         const std::vector<KernelKind>& kinds);

// --- ablation ----------------------------------------------------------------

struct AblationResult {
  std::pair<std::string, std::string> pair;
  std::vector<double> baseline_auc;  // per seed
  std::vector<double> ablated_auc;   // per seed, same order
  MetricSummary delta_auc;           // ablated - baseline
  std::int64_t frequency = 0;        // surviving atom pairs across the dataset
};

// Number of unordered atom pairs of the given SYBYL types that pass the
// covalent-exclusion rule, summed over the dataset.
std::int64_t pair_frequency(const std::vector<DatasetRecord>& records,
                            const std::pair<std::string, std::string>& pair,
                            const WcsParams& params);

// Retrains from scratch per pair and per seed, sharing splits and init seeds
// with the baseline arm. delta = ablated - baseline, so a positive mean
// means removal helped.
std::vector<AblationResult> ablation_study(const ExperimentConfig& config,
                                           const std::vector<DatasetRecord>& records,
                                           int n_seeds = 20);

std::string ablation_to_csv(const std::vector<AblationResult>& results);

}  // namespace gmc
