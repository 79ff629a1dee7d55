//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/molecule.hpp"

#include <cmath>

namespace gmc {

double Molecule::distance(int i, int j) const {
  const auto& p = atoms[static_cast<std::size_t>(i)].position;
  const auto& q = atoms[static_cast<std::size_t>(j)].position;
  const double dx = p[0] - q[0];
  const double dy = p[1] - q[1];
  const double dz = p[2] - q[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::vector<std::vector<int>> Molecule::adjacency() const {
  std::vector<std::vector<int>> adj(atoms.size());
  for (const Bond& bond : bonds) {
    adj[static_cast<std::size_t>(bond.a)].push_back(bond.b);
    adj[static_cast<std::size_t>(bond.b)].push_back(bond.a);
  }
  return adj;
}

}  // namespace gmc
