//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <cctype>
#include <string>
#include <vector>

#include "gmc/chem_io.hpp"
#include "gmc/error.hpp"

namespace gmc {

namespace {

// Splits on dots outside brackets. Brackets never nest in SMILES.
std::vector<std::string_view> split_fragments(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '[') ++depth;
    else if (s[i] == ']') --depth;
    else if (s[i] == '.' && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

bool is_two_letter_organic(char a, char b) {
  return (a == 'C' && b == 'l') || (a == 'B' && b == 'r');
}

bool is_one_letter_organic(char c) {
  switch (c) {
    case 'B': case 'C': case 'N': case 'O':
    case 'P': case 'S': case 'F': case 'I':
    case 'b': case 'c': case 'n': case 'o':
    case 'p': case 's':
      return true;
    default:
      return false;
  }
}

// Element symbol inside a bracket atom, after any isotope digits.
std::string_view bracket_element(std::string_view body) {
  std::size_t i = 0;
  while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i])))
    ++i;
  if (i >= body.size()) return {};
  std::size_t start = i;
  std::size_t len = 1;
  if (i + 1 < body.size() &&
      std::isupper(static_cast<unsigned char>(body[i])) &&
      std::islower(static_cast<unsigned char>(body[i + 1])))
    len = 2;
  return body.substr(start, len);
}

}  // namespace

int count_heavy_atoms(std::string_view fragment) {
  int heavy = 0;
  std::size_t i = 0;
  while (i < fragment.size()) {
    char c = fragment[i];
    if (c == '[') {
      std::size_t close = fragment.find(']', i);
      if (close == std::string_view::npos) break;  // unbalanced, count what we can
      std::string_view el = bracket_element(fragment.substr(i + 1, close - i - 1));
      if (!el.empty() && el != "H" && el != "h") ++heavy;
      i = close + 1;
      continue;
    }
    if (i + 1 < fragment.size() && is_two_letter_organic(c, fragment[i + 1])) {
      ++heavy;
      i += 2;
      continue;
    }
    if (is_one_letter_organic(c)) ++heavy;
    ++i;
  }
  return heavy;
}

std::string clean_smiles(std::string_view smiles) {
  if (smiles.find('.') == std::string_view::npos) return std::string(smiles);

  std::string out;
  for (std::string_view frag : split_fragments(smiles)) {
    if (count_heavy_atoms(frag) <= 1) continue;
    if (!out.empty()) out += '.';
    out += std::string(frag);
  }
  if (out.empty())
    throw EmptyAfterCleaning("no fragment with more than one heavy atom in '" +
                             std::string(smiles) + "'");
  return out;
}

double vdw_radius(std::string_view element, const RadiiTable& table) {
  return table.radius(element);
}

}  // namespace gmc
