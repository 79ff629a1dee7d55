//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gmc/molecule.hpp"

namespace gmc {

// TRIPOS MOL2 subset: MOLECULE, ATOM and BOND record blocks, whitespace
// delimited. Atom order is preserved exactly as written; downstream feature
// matrices depend on it.
Molecule parse_mol2(std::string_view text);
std::string write_mol2(const Molecule& mol);

// Drops dot-separated fragments with at most one heavy atom (isolated ions
// such as [Na+] or [Cl-]) and rejoins the rest. Inputs without dots pass
// through untouched. Throws EmptyAfterCleaning when nothing survives.
std::string clean_smiles(std::string_view smiles);

// Heavy-atom count used by clean_smiles; exposed for tests. Counts bracket
// atoms and organic-subset symbols, no full SMILES parse.
int count_heavy_atoms(std::string_view fragment);

double vdw_radius(std::string_view element, const RadiiTable& table);

struct LoadFailure {
  std::string id;
  std::string reason;
};

struct LoadedDataset {
  std::vector<DatasetRecord> records;
  std::vector<LoadFailure> skipped;
  LabelKind label_kind = LabelKind::binary;
};

enum class LabelExpectation { infer, binary, real };

// Manifest format: delimiter-separated text with a header row naming at
// least `id,label,mol2`; an optional `smiles` column is carried through.
// Per-record parse failures are collected in `skipped`, not fatal.
LoadedDataset load_dataset(const std::string& manifest_path,
                           const std::string& mol2_dir,
                           LabelExpectation expect = LabelExpectation::infer);

}  // namespace gmc
