//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmc/chem_io.hpp"
#include "gmc/error.hpp"

namespace fs = std::filesystem;

namespace gmc {

namespace {

std::string trim_copy(std::string s) {
  auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim_copy(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim_copy(cur));
  return fields;
}

struct ParsedLabel {
  LabelKind kind;
  double value;
};

ParsedLabel parse_label(const std::string& text, const std::string& id) {
  if (text == "1" || text == "0")
    return {LabelKind::binary, text == "1" ? 1.0 : 0.0};
  if (text == "BBB+") return {LabelKind::binary, 1.0};
  if (text == "BBB-" || text == "BBB\xe2\x80\x93")  // ASCII or en dash
    return {LabelKind::binary, 0.0};
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value))
    throw MalformedRecord("record '" + id + "': unparseable label '" + text +
                          "'");
  return {LabelKind::real, value};
}

}  // namespace

LoadedDataset load_dataset(const std::string& manifest_path,
                           const std::string& mol2_dir,
                           LabelExpectation expect) {
  std::ifstream in(manifest_path);
  if (!in)
    throw MalformedRecord("cannot open manifest '" + manifest_path + "'");

  std::string line;
  if (!std::getline(in, line))
    throw MalformedRecord("manifest '" + manifest_path + "' is empty");

  auto header = split_csv(line);
  auto col = [&](const std::string& name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int id_col = col("id");
  const int label_col = col("label");
  const int mol2_col = col("mol2");
  const int smiles_col = col("smiles");
  if (id_col < 0 || label_col < 0 || mol2_col < 0) {
    std::string missing = id_col < 0 ? "id" : (label_col < 0 ? "label" : "mol2");
    throw MissingColumn("manifest '" + manifest_path + "' lacks column '" +
                        missing + "'");
  }

  LoadedDataset out;
  bool kind_fixed = expect != LabelExpectation::infer;
  out.label_kind =
      expect == LabelExpectation::real ? LabelKind::real : LabelKind::binary;

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_copy(line).empty()) continue;
    auto fields = split_csv(line);
    std::size_t needed = static_cast<std::size_t>(
        std::max({id_col, label_col, mol2_col}) + 1);
    if (fields.size() < needed) {
      out.skipped.push_back({"line " + std::to_string(line_no),
                             "too few columns"});
      continue;
    }

    DatasetRecord rec;
    rec.id = fields[static_cast<std::size_t>(id_col)];
    try {
      ParsedLabel label =
          parse_label(fields[static_cast<std::size_t>(label_col)], rec.id);
      if (!kind_fixed && out.records.empty()) {
        // First record decides. A binary dataset stays binary; a real-valued
        // one accepts 0/1 as ordinary reals.
        out.label_kind = label.kind;
      }
      if (out.label_kind == LabelKind::binary &&
          label.kind != LabelKind::binary) {
        throw LabelKindMismatch("record '" + rec.id +
                                "': expected a binary label, got '" +
                                fields[static_cast<std::size_t>(label_col)] +
                                "'");
      }
      rec.label_kind = out.label_kind;
      rec.label = label.value;

      fs::path mol2_path =
          fs::path(mol2_dir) / fields[static_cast<std::size_t>(mol2_col)];
      std::ifstream mf(mol2_path);
      if (!mf) throw MalformedRecord("cannot open '" + mol2_path.string() + "'");
      std::stringstream buffer;
      buffer << mf.rdbuf();
      rec.molecule = parse_mol2(buffer.str());
      rec.molecule.id = rec.id;
      if (smiles_col >= 0 &&
          fields.size() > static_cast<std::size_t>(smiles_col) &&
          !fields[static_cast<std::size_t>(smiles_col)].empty())
        rec.molecule.source_smiles =
            fields[static_cast<std::size_t>(smiles_col)];
      out.records.push_back(std::move(rec));
    } catch (const LabelKindMismatch&) {
      throw;  // structural manifest defect, not a per-record failure
    } catch (const Error& e) {
      out.skipped.push_back({rec.id, e.what()});
    }
  }
  return out;
}

}  // namespace gmc
