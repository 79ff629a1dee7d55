//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/elements.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "gmc/error.hpp"
#include "gmc/hash.hpp"

namespace gmc {

namespace {

struct ElementInfo {
  int z;
  double mass;  // conventional standard atomic weight
};

// H..Lr. Masses are the IUPAC conventional values; exotic elements carry the
// mass number of the most stable isotope.
const std::unordered_map<std::string_view, ElementInfo>& periodic_table() {
  static const std::unordered_map<std::string_view, ElementInfo> table = {
      {"H", {1, 1.008}},
      {"He", {2, 4.002602}},
      {"Li", {3, 6.94}},
      {"Be", {4, 9.0121831}},
      {"B", {5, 10.81}},
      {"C", {6, 12.011}},
      {"N", {7, 14.007}},
      {"O", {8, 15.999}},
      {"F", {9, 18.998403163}},
      {"Ne", {10, 20.1797}},
      {"Na", {11, 22.98976928}},
      {"Mg", {12, 24.305}},
      {"Al", {13, 26.9815385}},
      {"Si", {14, 28.085}},
      {"P", {15, 30.973761998}},
      {"S", {16, 32.06}},
      {"Cl", {17, 35.45}},
      {"Ar", {18, 39.948}},
      {"K", {19, 39.0983}},
      {"Ca", {20, 40.078}},
      {"Sc", {21, 44.955908}},
      {"Ti", {22, 47.867}},
      {"V", {23, 50.9415}},
      {"Cr", {24, 51.9961}},
      {"Mn", {25, 54.938044}},
      {"Fe", {26, 55.845}},
      {"Co", {27, 58.933194}},
      {"Ni", {28, 58.6934}},
      {"Cu", {29, 63.546}},
      {"Zn", {30, 65.38}},
      {"Ga", {31, 69.723}},
      {"Ge", {32, 72.630}},
      {"As", {33, 74.921595}},
      {"Se", {34, 78.971}},
      {"Br", {35, 79.904}},
      {"Kr", {36, 83.798}},
      {"Rb", {37, 85.4678}},
      {"Sr", {38, 87.62}},
      {"Y", {39, 88.90584}},
      {"Zr", {40, 91.224}},
      {"Nb", {41, 92.90637}},
      {"Mo", {42, 95.95}},
      {"Tc", {43, 97.907}},
      {"Ru", {44, 101.07}},
      {"Rh", {45, 102.90550}},
      {"Pd", {46, 106.42}},
      {"Ag", {47, 107.8682}},
      {"Cd", {48, 112.414}},
      {"In", {49, 114.818}},
      {"Sn", {50, 118.710}},
      {"Sb", {51, 121.760}},
      {"Te", {52, 127.60}},
      {"I", {53, 126.90447}},
      {"Xe", {54, 131.293}},
      {"Cs", {55, 132.90545196}},
      {"Ba", {56, 137.327}},
      {"La", {57, 138.90547}},
      {"Ce", {58, 140.116}},
      {"Pr", {59, 140.90766}},
      {"Nd", {60, 144.242}},
      {"Pm", {61, 144.913}},
      {"Sm", {62, 150.36}},
      {"Eu", {63, 151.964}},
      {"Gd", {64, 157.25}},
      {"Tb", {65, 158.92535}},
      {"Dy", {66, 162.500}},
      {"Ho", {67, 164.93033}},
      {"Er", {68, 167.259}},
      {"Tm", {69, 168.93422}},
      {"Yb", {70, 173.045}},
      {"Lu", {71, 174.9668}},
      {"Hf", {72, 178.49}},
      {"Ta", {73, 180.94788}},
      {"W", {74, 183.84}},
      {"Re", {75, 186.207}},
      {"Os", {76, 190.23}},
      {"Ir", {77, 192.217}},
      {"Pt", {78, 195.084}},
      {"Au", {79, 196.966569}},
      {"Hg", {80, 200.592}},
      {"Tl", {81, 204.38}},
      {"Pb", {82, 207.2}},
      {"Bi", {83, 208.98040}},
      {"Po", {84, 208.982}},
      {"At", {85, 209.987}},
      {"Rn", {86, 222.018}},
      {"Fr", {87, 223.020}},
      {"Ra", {88, 226.025}},
      {"Ac", {89, 227.028}},
      {"Th", {90, 232.0377}},
      {"Pa", {91, 231.03588}},
      {"U", {92, 238.02891}},
      {"Np", {93, 237.048}},
      {"Pu", {94, 244.064}},
      {"Am", {95, 243.061}},
      {"Cm", {96, 247.070}},
      {"Bk", {97, 247.070}},
      {"Cf", {98, 251.080}},
      {"Es", {99, 252.083}},
      {"Fm", {100, 257.095}},
      {"Md", {101, 258.098}},
      {"No", {102, 259.101}},
      {"Lr", {103, 266.120}},
  };
  return table;
}

}  // namespace

ElementClass element_class(std::string_view element) {
  if (element == "C") return ElementClass::C;
  if (element == "H") return ElementClass::H;
  if (element == "O") return ElementClass::O;
  if (element == "N") return ElementClass::N;
  if (element == "P") return ElementClass::P;
  if (element == "Cl") return ElementClass::Cl;
  if (element == "F") return ElementClass::F;
  if (element == "Br") return ElementClass::Br;
  if (element == "S") return ElementClass::S;
  if (element == "Si") return ElementClass::Si;
  if (element == "I") return ElementClass::I;
  return ElementClass::X;
}

std::string_view element_class_name(ElementClass cls) {
  static constexpr std::array<std::string_view, kNumElementClasses> names = {
      "C", "H", "O", "N", "P", "Cl", "F", "Br", "S", "Si", "I", "X"};
  return names[static_cast<int>(cls)];
}

std::optional<int> atomic_number(std::string_view element) {
  auto it = periodic_table().find(element);
  if (it == periodic_table().end()) return std::nullopt;
  return it->second.z;
}

std::optional<double> atomic_mass(std::string_view element) {
  auto it = periodic_table().find(element);
  if (it == periodic_table().end()) return std::nullopt;
  return it->second.mass;
}

bool is_known_element(std::string_view element) {
  return periodic_table().count(element) > 0;
}

RadiiTable::RadiiTable(std::map<std::string, double> radii, double fallback)
    : radii_(std::move(radii)), fallback_(fallback) {
  for (const auto& [el, r] : radii_) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw RangeError("van der Waals radius for " + el + " must be > 0");
  }
  if (!(fallback_ > 0.0) || !std::isfinite(fallback_))
    throw RangeError("fallback van der Waals radius must be > 0");
}

const RadiiTable& RadiiTable::bondi() {
  static const RadiiTable table(
      {
          {"H", 1.20},
          {"C", 1.70},
          {"N", 1.55},
          {"O", 1.52},
          {"F", 1.47},
          {"P", 1.80},
          {"S", 1.80},
          {"Cl", 1.75},
          {"Br", 1.85},
          {"Si", 2.10},
          {"I", 1.98},
      },
      2.0);
  return table;
}

double RadiiTable::radius(std::string_view element) const {
  auto it = radii_.find(std::string(element));
  return it == radii_.end() ? fallback_ : it->second;
}

double RadiiTable::class_radius(ElementClass cls) const {
  if (cls == ElementClass::X) return fallback_;
  return radius(element_class_name(cls));
}

std::string RadiiTable::content_hash() const {
  std::ostringstream os;
  for (const auto& [el, r] : radii_) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", r);
    os << el << ':' << buf << ';';
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", fallback_);
  os << "*:" << buf;
  return to_hex(fnv1a(os.str()));
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(buf);
}

}  // namespace gmc
