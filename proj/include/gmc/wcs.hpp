//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gmc/elements.hpp"
#include "gmc/molecule.hpp"

namespace gmc {

enum class KernelKind { exponential, lorentz };

std::string_view kernel_name(KernelKind kind);

// Radial decay kernel turning an interatomic distance into an edge weight in
// (0, 1]. `eta` is the characteristic distance, `kappa` the decay power.
double kernel_eval(double d, double eta, double kappa, KernelKind kind);

struct WcsParams {
  KernelKind kernel = KernelKind::exponential;
  double kappa = 1.0;   // > 0
  double tau = 1.0;     // > 0, scales the characteristic distance
  double sigma = 0.0;   // >= 0, covalent-exclusion margin in Angstrom
  RadiiTable radii = RadiiTable::bondi();
  bool with_median = false;  // adds a sixth per-block statistic

  WcsParams() = default;
  WcsParams(KernelKind kernel, double kappa, double tau, double sigma,
            RadiiTable radii = RadiiTable::bondi(), bool with_median = false);

  int stats_per_class() const { return with_median ? 6 : 5; }
  int feature_width() const { return kNumElementClasses * stats_per_class(); }

  // Identifies a featurization: kernel, kappa, tau, sigma, radii hash and
  // statistic count. Models refuse feature caches with a different one.
  std::string fingerprint() const;
};

// eta_{kk'} = tau * (r_k + r_k'), symmetric in its class arguments.
double characteristic_distance(ElementClass k, ElementClass k2,
                               const WcsParams& params);

// Population standard deviation of the van der Waals radii of the distinct
// element classes present in the dataset; the default exclusion margin.
double dataset_sigma(const std::vector<Molecule>& molecules,
                     const RadiiTable& radii);

// Suppressed SYBYL-subtype pairs, unordered ("N.ar"/"O.2" matches either
// orientation). Applied as an edge filter before adjacency construction.
class AblationMask {
 public:
  AblationMask() = default;
  explicit AblationMask(
      const std::vector<std::pair<std::string, std::string>>& pairs);

  bool empty() const { return pairs_.empty(); }
  bool suppressed(const std::string& sybyl_a, const std::string& sybyl_b) const;
  const std::set<std::pair<std::string, std::string>>& pairs() const {
    return pairs_;
  }

 private:
  std::set<std::pair<std::string, std::string>> pairs_;  // stored sorted
};

struct PairAdjacency {
  std::pair<ElementClass, ElementClass> pair;
  std::vector<int> vertex_ids;  // atom indices, order of appearance
  Eigen::MatrixXd weights;      // symmetric, zero diagonal
};

// Kernel-weighted adjacency of the colored subgraph over classes {k, k2}.
// Pairs that are covalently bonded, closer than r_i + r_j + sigma, or
// suppressed by the mask carry weight zero. For k != k2 the graph is
// bipartite; for k == k2 it is complete over the surviving pairs.
PairAdjacency build_pair_adjacency(const Molecule& mol, ElementClass k,
                                   ElementClass k2, const WcsParams& params,
                                   const AblationMask& mask = {});

// D_ii = sum_j A_ij and L = D - A. Row sums of L vanish.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> degree_and_laplacian(
    const PairAdjacency& adj);

// Per-atom geometric feature matrix, atoms x (12 * stats). For each partner
// class the block holds [sum, min, max, mean, std] (plus median when
// enabled) over the nonzero incident weights; all-zero when the atom has no
// surviving partner of that class. Partner blocks follow the fixed class
// order C,H,O,N,P,Cl,F,Br,S,Si,I,X.
Eigen::MatrixXd wcs_atom_features(const Molecule& mol, const WcsParams& params,
                                  const AblationMask& mask = {});

}  // namespace gmc
