//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace gmc {

// Coarse atom classes used for colored-subgraph construction. Any element
// outside the eleven named ones collapses into X.
enum class ElementClass : int {
  C = 0,
  H = 1,
  O = 2,
  N = 3,
  P = 4,
  Cl = 5,
  F = 6,
  Br = 7,
  S = 8,
  Si = 9,
  I = 10,
  X = 11,
};

inline constexpr int kNumElementClasses = 12;

ElementClass element_class(std::string_view element);
std::string_view element_class_name(ElementClass cls);

// Periodic table lookups (H..Lr). Returns nullopt for strings that are not
// element symbols.
std::optional<int> atomic_number(std::string_view element);
std::optional<double> atomic_mass(std::string_view element);

bool is_known_element(std::string_view element);

// Van der Waals radii in Angstrom keyed by element symbol, with a total
// fallback for anything unlisted (the X class).
class RadiiTable {
 public:
  RadiiTable() = default;
  RadiiTable(std::map<std::string, double> radii, double fallback);

  // Bondi (1964) values for the eleven named elements, fallback 2.0 A.
  static const RadiiTable& bondi();

  double radius(std::string_view element) const;
  double class_radius(ElementClass cls) const;
  double fallback() const { return fallback_; }
  const std::map<std::string, double>& entries() const { return radii_; }

  // Stable content hash, part of featurization fingerprints.
  std::string content_hash() const;

 private:
  std::map<std::string, double> radii_;
  double fallback_ = 2.0;
};

}  // namespace gmc
