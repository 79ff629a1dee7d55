//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/wcs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "gmc/error.hpp"
#include "gmc/hash.hpp"

namespace gmc {

std::string_view kernel_name(KernelKind kind) {
  return kind == KernelKind::exponential ? "exponential" : "lorentz";
}

double kernel_eval(double d, double eta, double kappa, KernelKind kind) {
  const double ratio = std::pow(d / eta, kappa);
  return kind == KernelKind::exponential ? std::exp(-ratio)
                                         : 1.0 / (1.0 + ratio);
}

WcsParams::WcsParams(KernelKind kernel_, double kappa_, double tau_,
                     double sigma_, RadiiTable radii_, bool with_median_)
    : kernel(kernel_),
      kappa(kappa_),
      tau(tau_),
      sigma(sigma_),
      radii(std::move(radii_)),
      with_median(with_median_) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw RangeError("kernel power kappa must be > 0");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw RangeError("kernel scale tau must be > 0");
  if (sigma < 0.0 || !std::isfinite(sigma))
    throw RangeError("exclusion margin sigma must be finite and >= 0");
}

std::string WcsParams::fingerprint() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "kernel=%s;kappa=%.17g;tau=%.17g;sigma=%.17g",
                std::string(kernel_name(kernel)).c_str(), kappa, tau, sigma);
  std::ostringstream os;
  os << buf << ";stats=" << stats_per_class() << ";radii=" << radii.content_hash();
  return os.str();
}

double characteristic_distance(ElementClass k, ElementClass k2,
                               const WcsParams& params) {
  return params.tau *
         (params.radii.class_radius(k) + params.radii.class_radius(k2));
}

double dataset_sigma(const std::vector<Molecule>& molecules,
                     const RadiiTable& radii) {
  std::set<ElementClass> classes;
  for (const Molecule& mol : molecules)
    for (const Atom& atom : mol.atoms) classes.insert(element_class(atom.element));
  if (classes.empty()) throw EmptyDataset("no atoms in dataset");

  double mean = 0.0;
  for (ElementClass cls : classes) mean += radii.class_radius(cls);
  mean /= static_cast<double>(classes.size());
  double var = 0.0;
  for (ElementClass cls : classes) {
    const double d = radii.class_radius(cls) - mean;
    var += d * d;
  }
  var /= static_cast<double>(classes.size());
  return std::sqrt(var);
}

AblationMask::AblationMask(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& [a, b] : pairs)
    pairs_.insert(a <= b ? std::make_pair(a, b) : std::make_pair(b, a));
}

bool AblationMask::suppressed(const std::string& sybyl_a,
                              const std::string& sybyl_b) const {
  if (pairs_.empty()) return false;
  return pairs_.count(sybyl_a <= sybyl_b
                          ? std::make_pair(sybyl_a, sybyl_b)
                          : std::make_pair(sybyl_b, sybyl_a)) > 0;
}

namespace {

// Covalent exclusion: pairs closer than r_i + r_j + sigma are ignored, the
// boundary case is kept. Bonded pairs are never interaction edges.
bool pair_survives(const Molecule& mol,
                   const std::vector<std::vector<bool>>& bonded, int i, int j,
                   const WcsParams& params, const AblationMask& mask) {
  if (bonded[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
    return false;
  const double cutoff = params.radii.radius(mol.atoms[i].element) +
                        params.radii.radius(mol.atoms[j].element) +
                        params.sigma;
  if (mol.distance(i, j) < cutoff) return false;
  if (mask.suppressed(mol.atoms[i].sybyl_type, mol.atoms[j].sybyl_type))
    return false;
  return true;
}

std::vector<std::vector<bool>> bond_matrix(const Molecule& mol) {
  const std::size_t n = mol.atoms.size();
  std::vector<std::vector<bool>> bonded(n, std::vector<bool>(n, false));
  for (const Bond& bond : mol.bonds) {
    bonded[static_cast<std::size_t>(bond.a)][static_cast<std::size_t>(bond.b)] =
        true;
    bonded[static_cast<std::size_t>(bond.b)][static_cast<std::size_t>(bond.a)] =
        true;
  }
  return bonded;
}

struct BlockStats {
  double sum = 0.0, min = 0.0, max = 0.0, mean = 0.0, std = 0.0, median = 0.0;
};

BlockStats stats_of(std::vector<double>& weights) {
  BlockStats s;
  if (weights.empty()) return s;
  const auto n = static_cast<double>(weights.size());
  s.min = *std::min_element(weights.begin(), weights.end());
  s.max = *std::max_element(weights.begin(), weights.end());
  for (double w : weights) s.sum += w;
  s.mean = s.sum / n;
  double var = 0.0;
  for (double w : weights) var += (w - s.mean) * (w - s.mean);
  s.std = std::sqrt(var / n);  // population std, 0 for a single sample
  std::sort(weights.begin(), weights.end());
  const std::size_t mid = weights.size() / 2;
  s.median = weights.size() % 2 == 1
                 ? weights[mid]
                 : 0.5 * (weights[mid - 1] + weights[mid]);
  return s;
}

}  // namespace

PairAdjacency build_pair_adjacency(const Molecule& mol, ElementClass k,
                                   ElementClass k2, const WcsParams& params,
                                   const AblationMask& mask) {
  PairAdjacency adj;
  adj.pair = {k, k2};

  std::vector<ElementClass> vertex_class;
  for (const Atom& atom : mol.atoms) {
    const ElementClass cls = element_class(atom.element);
    if (cls == k || cls == k2) {
      adj.vertex_ids.push_back(atom.index);
      vertex_class.push_back(cls);
    }
  }

  const auto n = static_cast<Eigen::Index>(adj.vertex_ids.size());
  adj.weights = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return adj;

  const auto bonded = bond_matrix(mol);
  const double eta = characteristic_distance(k, k2, params);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = u + 1; v < n; ++v) {
      // k != k2: only opposite-class pairs interact (bipartite subgraph).
      if (k != k2 && vertex_class[u] == vertex_class[v]) continue;
      const int i = adj.vertex_ids[static_cast<std::size_t>(u)];
      const int j = adj.vertex_ids[static_cast<std::size_t>(v)];
      if (!pair_survives(mol, bonded, i, j, params, mask)) continue;
      const double w =
          kernel_eval(mol.distance(i, j), eta, params.kappa, params.kernel);
      adj.weights(u, v) = w;
      adj.weights(v, u) = w;
    }
  }
  return adj;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> degree_and_laplacian(
    const PairAdjacency& adj) {
  Eigen::VectorXd degree = adj.weights.rowwise().sum();
  Eigen::MatrixXd laplacian = -adj.weights;
  laplacian.diagonal() += degree;
  return {std::move(degree), std::move(laplacian)};
}

Eigen::MatrixXd wcs_atom_features(const Molecule& mol, const WcsParams& params,
                                  const AblationMask& mask) {
  const int n_atoms = mol.atom_count();
  const int stats = params.stats_per_class();
  Eigen::MatrixXd features =
      Eigen::MatrixXd::Zero(n_atoms, params.feature_width());

  std::vector<ElementClass> atom_class(static_cast<std::size_t>(n_atoms));
  for (const Atom& atom : mol.atoms)
    atom_class[static_cast<std::size_t>(atom.index)] =
        element_class(atom.element);

  for (int ka = 0; ka < kNumElementClasses; ++ka) {
    for (int kb = ka; kb < kNumElementClasses; ++kb) {
      const auto cls_a = static_cast<ElementClass>(ka);
      const auto cls_b = static_cast<ElementClass>(kb);
      PairAdjacency adj = build_pair_adjacency(mol, cls_a, cls_b, params, mask);
      const auto n = static_cast<Eigen::Index>(adj.vertex_ids.size());
      for (Eigen::Index u = 0; u < n; ++u) {
        const int atom = adj.vertex_ids[static_cast<std::size_t>(u)];
        const ElementClass own = atom_class[static_cast<std::size_t>(atom)];
        // In this subgraph, the atom's incident weights all come from the
        // opposite class (or its own when ka == kb).
        const int partner = own == cls_a ? kb : ka;
        std::vector<double> weights;
        for (Eigen::Index v = 0; v < n; ++v)
          if (adj.weights(u, v) != 0.0) weights.push_back(adj.weights(u, v));
        const BlockStats s = stats_of(weights);
        const int base = partner * stats;
        features(atom, base + 0) = s.sum;
        features(atom, base + 1) = s.min;
        features(atom, base + 2) = s.max;
        features(atom, base + 3) = s.mean;
        features(atom, base + 4) = s.std;
        if (params.with_median) features(atom, base + 5) = s.median;
      }
    }
  }
  return features;
}

}  // namespace gmc
