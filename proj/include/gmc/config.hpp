//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "gmc/experiment.hpp"

namespace gmc {

// Experiment configuration plus study-level extras carried by the [study]
// section of config files.
struct FullConfig {
  ExperimentConfig experiment;
  int budget = 10;                           // hpo candidate budget
  std::vector<std::string> hpo_axes;         // axis names to search; empty = all
  std::vector<double> tau_grid, kappa_grid;  // kernel-sweep grids
  std::vector<KernelKind> kernels{KernelKind::exponential, KernelKind::lorentz};

  bool operator==(const FullConfig&) const = default;
};

// Flat INI-style text: sections [dataset], [wcs], [model], [train], [study]
// with key = value lines and '#' comments. Unknown keys are rejected with a
// nearest-key suggestion; values are type-checked and range-checked against
// the published search space.
FullConfig parse_config(const std::string& text);

// Canonical dump with every default filled in; re-parses to an equal config.
std::string dump_config(const FullConfig& config);

FullConfig load_config_file(const std::string& path);

// "0..20" or "0,3,7" -> seed list
std::vector<std::uint64_t> parse_seed_spec(const std::string& spec);

// "N.ar-O.2,Cl-N.3" -> unordered pair list
std::vector<std::pair<std::string, std::string>> parse_pair_list(
    const std::string& spec);

// "0.5:0.5:10" (lo:step:hi) or "0.5,1,2" -> grid values
std::vector<double> parse_grid_spec(const std::string& spec);

}  // namespace gmc
