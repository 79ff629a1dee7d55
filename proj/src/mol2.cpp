//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmc/chem_io.hpp"
#include "gmc/error.hpp"

namespace gmc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

[[noreturn]] void malformed(int line_no, const std::string& what) {
  throw MalformedRecord("mol2 line " + std::to_string(line_no) + ": " + what);
}

double parse_real(std::string_view s, int line_no, const char* field) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
    malformed(line_no, std::string("bad ") + field + " value '" +
                           std::string(s) + "'");
  return value;
}

long parse_int(std::string_view s, int line_no, const char* field) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    malformed(line_no, std::string("bad ") + field + " value '" +
                           std::string(s) + "'");
  return value;
}

// Element symbol is the SYBYL type up to the first dot. Dummy and lone-pair
// pseudo atoms are rejected, as is anything that is not a periodic-table
// symbol.
std::string element_from_sybyl(std::string_view sybyl, int line_no) {
  std::string_view prefix = sybyl.substr(0, sybyl.find('.'));
  if (prefix == "Du" || prefix == "LP" || prefix == "Any")
    throw UnsupportedAtomType("mol2 line " + std::to_string(line_no) +
                              ": unsupported atom type '" + std::string(sybyl) +
                              "'");
  if (!is_known_element(prefix))
    throw UnsupportedAtomType("mol2 line " + std::to_string(line_no) +
                              ": unknown element in atom type '" +
                              std::string(sybyl) + "'");
  return std::string(prefix);
}

BondOrder bond_order_from_token(std::string_view token, int line_no) {
  if (token == "1") return BondOrder::single;
  if (token == "2") return BondOrder::double_;
  if (token == "3") return BondOrder::triple;
  if (token == "ar") return BondOrder::aromatic;
  if (token == "am") return BondOrder::amide;
  malformed(line_no, "unknown bond order '" + std::string(token) + "'");
}

const char* bond_order_token(BondOrder order) {
  switch (order) {
    case BondOrder::single: return "1";
    case BondOrder::double_: return "2";
    case BondOrder::triple: return "3";
    case BondOrder::aromatic: return "ar";
    case BondOrder::amide: return "am";
  }
  return "1";
}

}  // namespace

Molecule parse_mol2(std::string_view text) {
  enum class Section { none, molecule, atom, bond, other };

  Molecule mol;
  Section section = Section::none;
  int molecule_data_line = 0;
  bool saw_molecule = false, saw_atom = false, saw_bond = false;
  std::map<long, int> id_to_index;
  std::set<std::pair<int, int>> seen_pairs;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.rfind("@<TRIPOS>", 0) == 0) {
      std::string_view name = line.substr(9);
      if (name == "MOLECULE") {
        section = Section::molecule;
        saw_molecule = true;
        molecule_data_line = 0;
      } else if (name == "ATOM") {
        section = Section::atom;
        saw_atom = true;
      } else if (name == "BOND") {
        section = Section::bond;
        saw_bond = true;
      } else {
        section = Section::other;
      }
      continue;
    }

    switch (section) {
      case Section::molecule: {
        ++molecule_data_line;
        if (molecule_data_line == 1) mol.id = std::string(line);
        break;
      }
      case Section::atom: {
        auto fields = split_fields(line);
        if (fields.size() < 6)
          malformed(line_no, "ATOM record needs at least 6 fields, got " +
                                 std::to_string(fields.size()));
        Atom atom;
        long file_id = parse_int(fields[0], line_no, "atom id");
        atom.index = mol.atom_count();
        atom.position = {parse_real(fields[2], line_no, "x"),
                         parse_real(fields[3], line_no, "y"),
                         parse_real(fields[4], line_no, "z")};
        atom.sybyl_type = std::string(fields[5]);
        atom.element = element_from_sybyl(atom.sybyl_type, line_no);
        if (fields.size() >= 9) {
          atom.partial_charge = parse_real(fields[8], line_no, "charge");
          atom.formal_charge =
              static_cast<int>(std::llround(atom.partial_charge));
        }
        if (!id_to_index.emplace(file_id, atom.index).second)
          malformed(line_no, "duplicate atom id " + std::to_string(file_id));
        mol.atoms.push_back(std::move(atom));
        break;
      }
      case Section::bond: {
        auto fields = split_fields(line);
        if (fields.size() < 4)
          malformed(line_no, "BOND record needs 4 fields, got " +
                                 std::to_string(fields.size()));
        long ia = parse_int(fields[1], line_no, "bond atom");
        long ib = parse_int(fields[2], line_no, "bond atom");
        auto ita = id_to_index.find(ia);
        auto itb = id_to_index.find(ib);
        if (ita == id_to_index.end() || itb == id_to_index.end())
          throw DanglingBondIndex("mol2 line " + std::to_string(line_no) +
                                  ": bond references unknown atom id " +
                                  std::to_string(ita == id_to_index.end() ? ia
                                                                          : ib));
        Bond bond;
        bond.a = ita->second;
        bond.b = itb->second;
        bond.order = bond_order_from_token(fields[3], line_no);
        if (bond.a == bond.b)
          malformed(line_no, "bond joins atom " + std::to_string(ia) +
                                 " to itself");
        auto key = std::minmax(bond.a, bond.b);
        if (!seen_pairs.insert({key.first, key.second}).second)
          malformed(line_no, "duplicate bond between atom ids " +
                                 std::to_string(ia) + " and " +
                                 std::to_string(ib));
        mol.bonds.push_back(bond);
        break;
      }
      default:
        break;
    }
  }

  if (!saw_molecule || !saw_atom || !saw_bond)
    throw MalformedRecord(
        "mol2 text must contain MOLECULE, ATOM and BOND record blocks");
  if (mol.atoms.empty()) throw MalformedRecord("molecule has no atoms");
  if (mol.id.empty()) mol.id = "unnamed";
  return mol;
}

std::string write_mol2(const Molecule& mol) {
  std::ostringstream os;
  char buf[128];

  os << "@<TRIPOS>MOLECULE\n" << mol.id << '\n';
  os << mol.atoms.size() << ' ' << mol.bonds.size() << " 0 0 0\n";
  os << "SMALL\nUSER_CHARGES\n";

  os << "@<TRIPOS>ATOM\n";
  for (const Atom& atom : mol.atoms) {
    // Full precision so parse(write(m)) reproduces coordinates bit-exactly.
    std::snprintf(buf, sizeof(buf), "%d %s%d %.17g %.17g %.17g %s 1 MOL %.17g\n",
                  atom.index + 1, atom.element.c_str(), atom.index + 1,
                  atom.position[0], atom.position[1], atom.position[2],
                  atom.sybyl_type.c_str(), atom.partial_charge);
    os << buf;
  }

  os << "@<TRIPOS>BOND\n";
  for (std::size_t i = 0; i < mol.bonds.size(); ++i) {
    const Bond& bond = mol.bonds[i];
    os << (i + 1) << ' ' << (bond.a + 1) << ' ' << (bond.b + 1) << ' '
       << bond_order_token(bond.order) << '\n';
  }
  return os.str();
}

}  // namespace gmc
