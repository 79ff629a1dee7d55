//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gmc/checkpoint.hpp"
#include "gmc/config.hpp"
#include "gmc/error.hpp"
#include "gmc/experiment.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitFailedStudy = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string cache_dir;
  std::string seeds_spec;
  std::string pairs_spec;
  std::optional<std::uint64_t> seed;
};

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw gmc::Error("cannot write '" + path.string() + "'");
}

gmc::FullConfig resolve_config(const CommonArgs& args) {
  gmc::FullConfig config = gmc::load_config_file(args.config_path);
  if (!args.out_dir.empty()) config.experiment.out_dir = args.out_dir;
  if (!args.cache_dir.empty()) config.experiment.cache_dir = args.cache_dir;
  if (!args.seeds_spec.empty())
    config.experiment.seeds = gmc::parse_seed_spec(args.seeds_spec);
  if (args.seed.has_value()) config.experiment.seeds = {*args.seed};
  if (!args.pairs_spec.empty())
    config.experiment.ablation_pairs = gmc::parse_pair_list(args.pairs_spec);

  // Echo the fully-resolved configuration, defaults included.
  write_text(fs::path(config.experiment.out_dir) / "config_used.cfg",
             gmc::dump_config(config));
  return config;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

gmc::LoadedDataset load_records(const gmc::ExperimentConfig& exp) {
  exp.validate_paths();
  gmc::LoadedDataset loaded = gmc::load_dataset(
      exp.manifest_path, exp.mol2_dir,
      exp.task == gmc::Task::classification ? gmc::LabelExpectation::binary
                                            : gmc::LabelExpectation::real);
  std::cout << "loaded " << loaded.records.size() << " molecules";
  if (!loaded.skipped.empty())
    std::cout << " (" << loaded.skipped.size() << " skipped)";
  std::cout << "\n";
  for (const auto& skip : loaded.skipped)
    std::cerr << "skip " << skip.id << ": " << skip.reason << "\n";
  if (loaded.records.empty())
    throw gmc::EmptyDataset("no loadable records in '" + exp.manifest_path + "'");
  return loaded;
}

int cmd_featurize(const CommonArgs& args) {
  const gmc::FullConfig config = resolve_config(args);
  const gmc::ExperimentConfig& exp = config.experiment;
  const gmc::LoadedDataset loaded = load_records(exp);

  const gmc::WcsParams params = exp.wcs.resolve(loaded.records);
  const gmc::AblationMask mask(exp.ablation_pairs);

  std::vector<gmc::WcsCacheRecord> records;
  records.reserve(loaded.records.size());
  for (const auto& rec : loaded.records)
    records.push_back({rec.id, gmc::wcs_atom_features(rec.molecule, params, mask)});

  const fs::path out =
      fs::path(exp.out_dir) / "features.gmcf";
  fs::create_directories(exp.out_dir);
  gmc::save_wcs_cache(out.string(), params.fingerprint(), records);
  std::cout << "featurized " << records.size() << " molecules -> " << out.string()
            << "\nfingerprint " << params.fingerprint() << "\n";
  return kExitOk;
}

int cmd_split(const CommonArgs& args) {
  const gmc::FullConfig config = resolve_config(args);
  const gmc::ExperimentConfig& exp = config.experiment;
  const gmc::LoadedDataset loaded = load_records(exp);

  for (std::uint64_t seed : exp.seeds) {
    const gmc::SplitAssignment split =
        gmc::scaffold_split(loaded.records, exp.ratios, seed);
    const fs::path out = fs::path(exp.out_dir) / "splits" /
                         ("seed_" + std::to_string(seed) + ".csv");
    write_text(out, gmc::split_to_csv(loaded.records, split));
    std::cout << "seed " << seed << " -> " << out.string() << "\n";
  }
  return kExitOk;
}

// One seed with --seed, several with --seeds, the config's full list
// otherwise.
int cmd_train(const CommonArgs& args) {
  const gmc::FullConfig config = resolve_config(args);
  const gmc::ExperimentReport report =
      gmc::run_experiment(config.experiment, true);
  std::cout << gmc::report_to_csv(report);
  std::cout << "artifacts in " << config.experiment.out_dir << "\n";
  return kExitOk;
}

int cmd_predict(const CommonArgs& args, const std::string& model_path) {
  const gmc::FullConfig config = resolve_config(args);
  const gmc::ExperimentConfig& exp = config.experiment;
  const gmc::LoadedDataset loaded = load_records(exp);

  const gmc::ModelParams model = gmc::load_checkpoint(model_path);
  const gmc::WcsParams params = exp.wcs.resolve(loaded.records);
  const gmc::FeaturizedDataset feats = gmc::featurize_with_cache(
      loaded.records, params, gmc::AblationMask{}, exp.cache_dir);

  const std::vector<double> preds =
      gmc::predict_batch(model, feats.graphs, feats.fingerprint);

  std::ostringstream os;
  os << "id,prediction\n";
  for (std::size_t i = 0; i < preds.size(); ++i)
    os << loaded.records[i].id << ',' << fmt(preds[i]) << '\n';
  const fs::path out = fs::path(exp.out_dir) / "predictions.csv";
  write_text(out, os.str());
  std::cout << "wrote " << preds.size() << " predictions -> " << out.string()
            << "\n";
  return kExitOk;
}

int cmd_evaluate(const CommonArgs& args, const std::string& model_path) {
  const gmc::FullConfig config = resolve_config(args);
  const gmc::ExperimentConfig& exp = config.experiment;
  const gmc::LoadedDataset loaded = load_records(exp);

  const gmc::ModelParams model = gmc::load_checkpoint(model_path);
  const gmc::WcsParams params = exp.wcs.resolve(loaded.records);
  const gmc::FeaturizedDataset feats = gmc::featurize_with_cache(
      loaded.records, params, gmc::AblationMask{}, exp.cache_dir);

  const std::uint64_t seed = exp.seeds.front();
  const gmc::SplitAssignment split =
      gmc::scaffold_split(loaded.records, exp.ratios, seed);

  std::vector<gmc::MolGraph> test;
  for (std::size_t i = 0; i < feats.graphs.size(); ++i)
    if (split.partition[i] == gmc::Partition::test)
      test.push_back(feats.graphs[i]);
  if (test.empty()) throw gmc::EmptyDataset("test partition is empty");

  const std::vector<double> preds =
      gmc::predict_batch(model, test, feats.fingerprint);
  std::vector<double> labels;
  for (const auto& g : test) labels.push_back(g.label);

  std::cout << "metric,seed,value\n";
  if (model.config.task == gmc::Task::classification) {
    std::cout << "auc," << seed << ',' << fmt(gmc::auc_roc(preds, labels))
              << "\n";
  } else {
    std::cout << "rmse," << seed << ',' << fmt(gmc::rmse(preds, labels)) << "\n";
    std::cout << "pearson," << seed << ',' << fmt(gmc::pearson(preds, labels))
              << "\n";
  }
  return kExitOk;
}

int cmd_ablate(const CommonArgs& args) {
  const gmc::FullConfig config = resolve_config(args);
  const gmc::ExperimentConfig& exp = config.experiment;
  const gmc::LoadedDataset loaded = load_records(exp);

  const int n_seeds = static_cast<int>(exp.seeds.size());
  const std::vector<gmc::AblationResult> results =
      gmc::ablation_study(exp, loaded.records, n_seeds);
  if (results.empty()) {
    std::cout << "no pairs to ablate\n";
    return kExitOk;
  }
  const fs::path out = fs::path(exp.out_dir) / "ablation.csv";
  write_text(out, gmc::ablation_to_csv(results));
  write_text(fs::path(exp.out_dir) / "run_manifest.csv",
             gmc::run_manifest_csv(exp,
                                   exp.wcs.resolve(loaded.records).fingerprint(),
                                   {{"ablation", out.string()}}));
  for (const auto& res : results)
    std::cout << res.pair.first << '-' << res.pair.second << ": mean dAUC "
              << fmt(res.delta_auc.mean) << " [" << fmt(res.delta_auc.ci_lo)
              << ", " << fmt(res.delta_auc.ci_hi) << "], frequency "
              << res.frequency << "\n";
  std::cout << "report -> " << out.string() << "\n";
  return kExitOk;
}

int cmd_hpo(const CommonArgs& args, int budget_override,
            std::uint64_t sample_seed) {
  const gmc::FullConfig config = resolve_config(args);
  const gmc::ExperimentConfig& exp = config.experiment;
  const gmc::LoadedDataset loaded = load_records(exp);

  // [study] hpo_axes restricts the search to named axes; unnamed fields
  // keep their configured values.
  std::vector<gmc::SearchAxis> space = gmc::default_search_space();
  if (!config.hpo_axes.empty()) {
    std::vector<gmc::SearchAxis> filtered;
    for (const std::string& name : config.hpo_axes) {
      bool found = false;
      for (const gmc::SearchAxis& axis : space)
        if (axis.name == name) {
          filtered.push_back(axis);
          found = true;
        }
      if (!found)
        throw gmc::UnknownKey("hpo_axes names unknown axis '" + name + "'");
    }
    space = std::move(filtered);
  }

  const int budget = budget_override > 0 ? budget_override : config.budget;
  const gmc::GridSearchResult result =
      gmc::grid_search(space, exp, loaded.records, budget, sample_seed);

  std::ostringstream os;
  os << "candidate,score\n";
  for (const auto& [label, score] : result.evaluated)
    os << '"' << label << "\"," << fmt(score) << '\n';
  write_text(fs::path(exp.out_dir) / "hpo.csv", os.str());

  gmc::FullConfig best = config;
  best.experiment = result.best;
  write_text(fs::path(exp.out_dir) / "best_config.cfg", gmc::dump_config(best));
  write_text(
      fs::path(exp.out_dir) / "run_manifest.csv",
      gmc::run_manifest_csv(
          exp, exp.wcs.resolve(loaded.records).fingerprint(),
          {{"hpo", (fs::path(exp.out_dir) / "hpo.csv").string()},
           {"best_config",
            (fs::path(exp.out_dir) / "best_config.cfg").string()}}));
  std::cout << "evaluated " << result.evaluated.size()
            << " candidates; best score " << fmt(result.best_score) << "\n"
            << "best config -> "
            << (fs::path(exp.out_dir) / "best_config.cfg").string() << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
  const gmc::FullConfig config = resolve_config(args);
  const gmc::ExperimentConfig& exp = config.experiment;
  if (config.tau_grid.empty() || config.kappa_grid.empty())
    throw gmc::EmptySpace(
        "sweep needs tau_grid and kappa_grid in the [study] section");
  const gmc::LoadedDataset loaded = load_records(exp);

  const gmc::SweepResult result = gmc::kernel_sweep(
      exp, loaded.records, config.tau_grid, config.kappa_grid, config.kernels);

  std::ostringstream os;
  os << "kernel,kappa,tau,score\n";
  for (const auto& [point, score] : result.evaluated)
    os << gmc::kernel_name(point.kernel) << ',' << fmt(point.kappa) << ','
       << fmt(point.tau) << ',' << fmt(score) << '\n';
  write_text(fs::path(exp.out_dir) / "sweep.csv", os.str());
  write_text(fs::path(exp.out_dir) / "run_manifest.csv",
             gmc::run_manifest_csv(
                 exp, result.best.fingerprint(),
                 {{"sweep", (fs::path(exp.out_dir) / "sweep.csv").string()}}));
  std::cout << "best: " << result.best.fingerprint() << " score "
            << fmt(result.best_score) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric multi-color message-passing pipeline for "
               "blood-brain-barrier permeability prediction"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string model_path;
  int budget = 0;
  std::uint64_t hpo_seed = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", args.config_path, "config file");
    if (needs_config) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory override");
    cmd->add_option("--cache", args.cache_dir, "feature cache directory");
  };

  auto* featurize = app.add_subcommand("featurize", "write the WCS feature cache");
  add_common(featurize);
  featurize->add_option("--pairs", args.pairs_spec, "ablation mask pairs A-B,...");

  auto* split = app.add_subcommand("split", "write scaffold-split assignments");
  add_common(split);
  split->add_option("--seeds", args.seeds_spec, "seed list or range A..B");

  auto* train = app.add_subcommand("train", "train and evaluate per seed");
  add_common(train);
  train->add_option("--seed", args.seed, "single split/init seed");
  train->add_option("--seeds", args.seeds_spec, "seed list or range A..B");

  auto* predict = app.add_subcommand("predict", "predict every manifest record");
  add_common(predict);
  predict->add_option("--model", model_path, "checkpoint path")->required();

  auto* evaluate = app.add_subcommand("evaluate", "evaluate on a test partition");
  add_common(evaluate);
  evaluate->add_option("--model", model_path, "checkpoint path")->required();
  evaluate->add_option("--seed", args.seed, "split seed");

  auto* ablate = app.add_subcommand("ablate", "atom-pair ablation study");
  add_common(ablate);
  ablate->add_option("--pairs", args.pairs_spec, "pairs A-B,C-D");
  ablate->add_option("--seeds", args.seeds_spec, "seed list or range A..B");

  auto* hpo = app.add_subcommand("hpo", "hyperparameter grid search");
  add_common(hpo);
  hpo->add_option("--budget", budget, "candidate budget");
  hpo->add_option("--seed", hpo_seed, "sampling seed");

  auto* sweep = app.add_subcommand("sweep", "kernel-parameter sweep");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (featurize->parsed()) return cmd_featurize(args);
    if (split->parsed()) return cmd_split(args);
    if (train->parsed()) return cmd_train(args);
    if (predict->parsed()) return cmd_predict(args, model_path);
    if (evaluate->parsed()) return cmd_evaluate(args, model_path);
    if (ablate->parsed()) return cmd_ablate(args);
    if (hpo->parsed()) return cmd_hpo(args, budget, hpo_seed);
    if (sweep->parsed()) return cmd_sweep(args);
  } catch (const gmc::Diverged& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kExitFailedStudy;
  } catch (const gmc::FailedStudy& e) {
    std::cerr << "failed study: " << e.what() << "\n";
    return kExitFailedStudy;
  } catch (const gmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
