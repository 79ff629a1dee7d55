//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gmc/elements.hpp"

namespace gmc {

enum class BondOrder { single, double_, triple, aromatic, amide };

struct Atom {
  int index = 0;  // 0-based position in the parent molecule
  std::string element;
  std::string sybyl_type;       // e.g. "N.ar", "C.3"
  std::array<double, 3> position{0.0, 0.0, 0.0};  // Angstrom
  int formal_charge = 0;
  double partial_charge = 0.0;  // carried from input, unused by features
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::single;
};

struct Molecule {
  std::string id;
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::optional<std::string> source_smiles;

  int atom_count() const { return static_cast<int>(atoms.size()); }
  double distance(int i, int j) const;

  // Neighbor atom indices, in bond order.
  std::vector<std::vector<int>> adjacency() const;
};

enum class LabelKind { binary, real };

struct DatasetRecord {
  std::string id;
  LabelKind label_kind = LabelKind::binary;
  double label = 0.0;  // 1/0 for BBB+/BBB-, logBB otherwise
  Molecule molecule;
};

}  // namespace gmc
