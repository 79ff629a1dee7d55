//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "gmc/molecule.hpp"
#include "gmc/wcs.hpp"

namespace gmc {

// Cheminformatics atom feature layout, 127 wide:
//   atomic number one-hot (100) | degree (6) | formal charge (5, -2..+2) |
//   chirality (4) | bonded-H count (5) | hybridization (5) |
//   aromatic flag (1) | mass/100 (1)
// Out-of-range values clamp to the nearest slot.
inline constexpr int kCafWidth = 127;
inline constexpr int kBondFeatureWidth = 12;

Eigen::VectorXd atom_caf(const Molecule& mol, int atom_index);

// Bond feature layout, 12 wide: type one-hot (4: single/double/triple/
// aromatic, amide counts as single) | conjugated (1) | in-ring (1) |
// stereo one-hot (6, always the "none" slot for MOL2 input).
Eigen::VectorXd bond_features(const Molecule& mol, const Bond& bond);

// True when the bond lies on a cycle of the molecular graph.
bool bond_in_ring(const Molecule& mol, const Bond& bond);

struct MolGraph {
  std::string id;
  Eigen::MatrixXd node_features;             // atoms x (127 + wcs width)
  std::vector<std::pair<int, int>> edges;    // directed (src, dst); the two
                                             // directions of a bond adjacent
  Eigen::MatrixXd edge_features;             // directed edges x 12
  double label = 0.0;

  int atom_count() const { return static_cast<int>(node_features.rows()); }
  int node_width() const { return static_cast<int>(node_features.cols()); }
};

// Fuses CAF and WCS per-atom features: node row i = [CAF(i) | WCS(i)].
// Throws DimensionMismatch unless wcs_features has one row per atom.
MolGraph build_molgraph(const Molecule& mol, const Eigen::MatrixXd& wcs_features,
                        double label);

struct FeaturizedDataset {
  std::vector<MolGraph> graphs;
  std::string fingerprint;  // of the WcsParams used
};

FeaturizedDataset featurize_dataset(const std::vector<DatasetRecord>& records,
                                    const WcsParams& params,
                                    const AblationMask& mask = {});

// Featurization cache, a self-describing little-endian binary file:
// magic "GMCF", version, fingerprint, then per-molecule (id, dims, row-major
// f64 WCS matrix). Round-trips bit-exactly.
struct WcsCacheRecord {
  std::string id;
  Eigen::MatrixXd features;
};

void save_wcs_cache(const std::string& path, const std::string& fingerprint,
                    const std::vector<WcsCacheRecord>& records);

struct WcsCache {
  std::string fingerprint;
  std::vector<WcsCacheRecord> records;
};

WcsCache load_wcs_cache(const std::string& path);

}  // namespace gmc
