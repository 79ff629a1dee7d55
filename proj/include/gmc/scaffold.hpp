//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gmc/molecule.hpp"

namespace gmc {

// Ring-and-linker core: hydrogens stripped, then terminal atoms pruned
// iteratively; exocyclic double-bonded atoms on rings are kept. Acyclic
// molecules reduce to an empty Molecule.
Molecule extract_scaffold(const Molecule& mol);

// Bemis-Murcko scaffold key: the extracted core canonicalized by iterative
// neighborhood-label refinement (element + bond-order labels) and hashed.
// Acyclic molecules map to "".
std::string murcko_scaffold(const Molecule& mol);

enum class Partition { train, val, test };
std::string_view partition_name(Partition p);

struct SplitAssignment {
  std::vector<Partition> partition;     // parallel to the input records
  std::vector<std::string> scaffold;    // scaffold key per record
  std::uint64_t seed = 0;
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
};

// Groups records by scaffold key, shuffles group order by seed, then
// greedily assigns each group to the partition whose fill fraction is
// furthest below target (ties resolve train > val > test).
SplitAssignment scaffold_split(const std::vector<DatasetRecord>& records,
                               const std::array<double, 3>& ratios,
                               std::uint64_t seed);

// Split file rows: id,partition,seed,scaffold_key
std::string split_to_csv(const std::vector<DatasetRecord>& records,
                         const SplitAssignment& split);

}  // namespace gmc
