//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/featurize.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <vector>

#include "gmc/error.hpp"

namespace gmc {

namespace {

enum class Hybridization { sp = 0, sp2 = 1, sp3 = 2, sp3d = 3, sp3d2 = 4 };

// Fixed SYBYL-suffix map; anything unlisted is treated as sp3.
Hybridization hybridization_of(const std::string& sybyl_type) {
  const std::size_t dot = sybyl_type.find('.');
  if (dot == std::string::npos) return Hybridization::sp3;
  const std::string suffix = sybyl_type.substr(dot + 1);
  if (suffix == "1") return Hybridization::sp;
  if (suffix == "2" || suffix == "ar" || suffix == "am" || suffix == "pl3")
    return Hybridization::sp2;
  if (suffix == "3" || suffix == "o" || suffix == "o2") return Hybridization::sp3;
  return Hybridization::sp3;
}

bool has_ar_suffix(const std::string& sybyl_type) {
  return sybyl_type.size() > 3 &&
         sybyl_type.compare(sybyl_type.size() - 3, 3, ".ar") == 0;
}

int clamp_slot(int value, int lo, int hi) {
  return std::max(lo, std::min(hi, value));
}

bool multiple_order(BondOrder order) {
  return order == BondOrder::double_ || order == BondOrder::triple ||
         order == BondOrder::aromatic;
}

}  // namespace

bool bond_in_ring(const Molecule& mol, const Bond& bond) {
  // An edge lies on a cycle iff its endpoints stay connected without it.
  const std::size_t n = mol.atoms.size();
  std::vector<bool> seen(n, false);
  std::queue<int> queue;
  queue.push(bond.a);
  seen[static_cast<std::size_t>(bond.a)] = true;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop();
    if (cur == bond.b) return true;
    for (const Bond& other : mol.bonds) {
      if (&other == &bond) continue;
      int next = -1;
      if (other.a == cur) next = other.b;
      else if (other.b == cur) next = other.a;
      if (next >= 0 && !seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = true;
        queue.push(next);
      }
    }
  }
  return false;
}

Eigen::VectorXd atom_caf(const Molecule& mol, int atom_index) {
  const Atom& atom = mol.atoms[static_cast<std::size_t>(atom_index)];
  Eigen::VectorXd caf = Eigen::VectorXd::Zero(kCafWidth);
  int base = 0;

  // atomic number (100)
  const int z = atomic_number(atom.element).value_or(100);
  caf[base + clamp_slot(z - 1, 0, 99)] = 1.0;
  base += 100;

  // degree (6)
  int degree = 0;
  int h_neighbors = 0;
  bool aromatic_bond = false;
  for (const Bond& bond : mol.bonds) {
    if (bond.a != atom_index && bond.b != atom_index) continue;
    ++degree;
    const int other = bond.a == atom_index ? bond.b : bond.a;
    if (mol.atoms[static_cast<std::size_t>(other)].element == "H") ++h_neighbors;
    if (bond.order == BondOrder::aromatic) aromatic_bond = true;
  }
  caf[base + clamp_slot(degree, 0, 5)] = 1.0;
  base += 6;

  // formal charge (5), slots -2..+2
  caf[base + clamp_slot(atom.formal_charge + 2, 0, 4)] = 1.0;
  base += 5;

  // chirality (4); MOL2 carries none, so always the "unspecified" slot
  caf[base + 0] = 1.0;
  base += 4;

  // bonded hydrogens (5)
  caf[base + clamp_slot(h_neighbors, 0, 4)] = 1.0;
  base += 5;

  // hybridization (5)
  caf[base + static_cast<int>(hybridization_of(atom.sybyl_type))] = 1.0;
  base += 5;

  // aromaticity
  caf[base] = (has_ar_suffix(atom.sybyl_type) || aromatic_bond) ? 1.0 : 0.0;
  base += 1;

  // mass / 100
  caf[base] = atomic_mass(atom.element).value_or(0.0) / 100.0;
  return caf;
}

Eigen::VectorXd bond_features(const Molecule& mol, const Bond& bond) {
  Eigen::VectorXd feat = Eigen::VectorXd::Zero(kBondFeatureWidth);

  int type_slot = 0;
  switch (bond.order) {
    case BondOrder::single:
    case BondOrder::amide: type_slot = 0; break;
    case BondOrder::double_: type_slot = 1; break;
    case BondOrder::triple: type_slot = 2; break;
    case BondOrder::aromatic: type_slot = 3; break;
  }
  feat[type_slot] = 1.0;

  // Conjugation: aromatic bonds, or a bond joining two sp/sp2/aromatic atoms
  // that each carry at least one multiple-order or aromatic bond.
  auto conjugatable = [&](int atom_index) {
    const Atom& atom = mol.atoms[static_cast<std::size_t>(atom_index)];
    const Hybridization hyb = hybridization_of(atom.sybyl_type);
    bool site = hyb == Hybridization::sp || hyb == Hybridization::sp2 ||
                has_ar_suffix(atom.sybyl_type);
    if (!site) return false;
    for (const Bond& other : mol.bonds)
      if ((other.a == atom_index || other.b == atom_index) &&
          multiple_order(other.order))
        return true;
    return false;
  };
  const bool conjugated = bond.order == BondOrder::aromatic ||
                          (conjugatable(bond.a) && conjugatable(bond.b));
  feat[4] = conjugated ? 1.0 : 0.0;

  feat[5] = bond_in_ring(mol, bond) ? 1.0 : 0.0;

  // stereo one-hot; MOL2 input carries no stereo annotations -> "none" slot
  feat[6] = 1.0;
  return feat;
}

MolGraph build_molgraph(const Molecule& mol, const Eigen::MatrixXd& wcs_features,
                        double label) {
  if (wcs_features.rows() != mol.atom_count())
    throw DimensionMismatch(
        "wcs feature rows (" + std::to_string(wcs_features.rows()) +
        ") != atom count (" + std::to_string(mol.atom_count()) + ") for '" +
        mol.id + "'");

  MolGraph graph;
  graph.id = mol.id;
  graph.label = label;

  const int n = mol.atom_count();
  const auto wcs_width = static_cast<int>(wcs_features.cols());
  graph.node_features.resize(n, kCafWidth + wcs_width);
  for (int i = 0; i < n; ++i) {
    graph.node_features.row(i).head(kCafWidth) = atom_caf(mol, i).transpose();
    graph.node_features.row(i).tail(wcs_width) = wcs_features.row(i);
  }

  graph.edges.reserve(mol.bonds.size() * 2);
  graph.edge_features.resize(static_cast<Eigen::Index>(mol.bonds.size()) * 2,
                             kBondFeatureWidth);
  Eigen::Index row = 0;
  for (const Bond& bond : mol.bonds) {
    const Eigen::VectorXd feat = bond_features(mol, bond);
    graph.edges.emplace_back(bond.a, bond.b);
    graph.edge_features.row(row++) = feat.transpose();
    graph.edges.emplace_back(bond.b, bond.a);
    graph.edge_features.row(row++) = feat.transpose();
  }
  return graph;
}

FeaturizedDataset featurize_dataset(const std::vector<DatasetRecord>& records,
                                    const WcsParams& params,
                                    const AblationMask& mask) {
  FeaturizedDataset out;
  out.fingerprint = params.fingerprint();
  out.graphs.reserve(records.size());
  for (const DatasetRecord& rec : records)
    out.graphs.push_back(build_molgraph(
        rec.molecule, wcs_atom_features(rec.molecule, params, mask), rec.label));
  return out;
}

}  // namespace gmc
