//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "gmc/chem_io.hpp"
#include "gmc/error.hpp"
#include "testutil.hpp"

using namespace gmc;

namespace {

const char* kWaterMol2 = R"(@<TRIPOS>MOLECULE
water
3 2 0 0 0
SMALL
NO_CHARGES
@<TRIPOS>ATOM
1 O1 0.0000 0.0000 0.0000 O.3 1 MOL 0.0
2 H1 0.9572 0.0000 0.0000 H 1 MOL 0.0
3 H2 -0.2400 0.9266 0.0000 H 1 MOL 0.0
@<TRIPOS>BOND
1 1 2 1
2 1 3 1
)";

std::filesystem::path make_temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("gmc_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse_mol2 reads a 3-atom water block") {
  const Molecule mol = parse_mol2(kWaterMol2);
  REQUIRE(mol.atom_count() == 3);
  CHECK(mol.id == "water");
  CHECK(mol.atoms[0].element == "O");
  CHECK(mol.atoms[1].element == "H");
  CHECK(mol.atoms[2].element == "H");
  REQUIRE(mol.bonds.size() == 2);
  CHECK(mol.bonds[0].a == 0);
  CHECK(mol.bonds[0].b == 1);
  CHECK(mol.bonds[1].b == 2);
  CHECK(mol.atoms[1].position[0] == doctest::Approx(0.9572));
}

TEST_CASE("parse_mol2 rejects dangling bond indices") {
  const std::string text = R"(@<TRIPOS>MOLECULE
m
@<TRIPOS>ATOM
1 C1 0 0 0 C.3 1 M 0.0
2 C2 1.5 0 0 C.3 1 M 0.0
@<TRIPOS>BOND
1 1 99 1
)";
  CHECK_THROWS_AS(parse_mol2(text), DanglingBondIndex);
}

TEST_CASE("parse_mol2 rejects dummy and unknown atom types") {
  const std::string dummy = R"(@<TRIPOS>MOLECULE
m
@<TRIPOS>ATOM
1 X1 0 0 0 Du 1 M 0.0
@<TRIPOS>BOND
)";
  CHECK_THROWS_AS(parse_mol2(dummy), UnsupportedAtomType);

  const std::string unknown = R"(@<TRIPOS>MOLECULE
m
@<TRIPOS>ATOM
1 X1 0 0 0 Zz.3 1 M 0.0
@<TRIPOS>BOND
)";
  CHECK_THROWS_AS(parse_mol2(unknown), UnsupportedAtomType);
}

TEST_CASE("parse_mol2 malformed records carry line diagnostics") {
  const std::string text = R"(@<TRIPOS>MOLECULE
m
@<TRIPOS>ATOM
1 C1 0 zero 0 C.3 1 M 0.0
@<TRIPOS>BOND
)";
  try {
    parse_mol2(text);
    FAIL("expected MalformedRecord");
  } catch (const MalformedRecord& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("parse_mol2 rejects duplicate and self bonds") {
  const std::string dup = R"(@<TRIPOS>MOLECULE
m
@<TRIPOS>ATOM
1 C1 0 0 0 C.3 1 M 0.0
2 C2 1.5 0 0 C.3 1 M 0.0
@<TRIPOS>BOND
1 1 2 1
2 2 1 1
)";
  CHECK_THROWS_AS(parse_mol2(dup), MalformedRecord);

  const std::string self = R"(@<TRIPOS>MOLECULE
m
@<TRIPOS>ATOM
1 C1 0 0 0 C.3 1 M 0.0
@<TRIPOS>BOND
1 1 1 1
)";
  CHECK_THROWS_AS(parse_mol2(self), MalformedRecord);
}

TEST_CASE("8-chlorotheophylline fixture has the expected composition") {
  const Molecule mol = test::load_fixture("chlorotheophylline8.mol2");
  REQUIRE(mol.atom_count() == 21);
  std::map<std::string, int> counts;
  for (const Atom& atom : mol.atoms) ++counts[atom.element];
  CHECK(counts["C"] == 7);
  CHECK(counts["H"] == 7);
  CHECK(counts["Cl"] == 1);
  CHECK(counts["N"] == 4);
  CHECK(counts["O"] == 2);
}

TEST_CASE("parse -> write -> parse round-trips structurally") {
  const Molecule orig = test::load_fixture("chlorotheophylline8.mol2");
  const Molecule back = parse_mol2(write_mol2(orig));
  REQUIRE(back.atom_count() == orig.atom_count());
  REQUIRE(back.bonds.size() == orig.bonds.size());
  for (int i = 0; i < orig.atom_count(); ++i) {
    const auto& a = orig.atoms[static_cast<std::size_t>(i)];
    const auto& b = back.atoms[static_cast<std::size_t>(i)];
    CHECK(a.element == b.element);
    CHECK(a.sybyl_type == b.sybyl_type);
    CHECK(a.position == b.position);  // bit-exact through %.17g
    CHECK(a.formal_charge == b.formal_charge);
  }
  for (std::size_t i = 0; i < orig.bonds.size(); ++i) {
    CHECK(orig.bonds[i].a == back.bonds[i].a);
    CHECK(orig.bonds[i].b == back.bonds[i].b);
    CHECK(orig.bonds[i].order == back.bonds[i].order);
  }
}

TEST_CASE("mol2 charge column rounds into the formal charge") {
  const std::string text = R"(@<TRIPOS>MOLECULE
m
@<TRIPOS>ATOM
1 N1 0 0 0 N.4 1 M 0.9123
2 C1 1.5 0 0 C.3 1 M -0.2
@<TRIPOS>BOND
1 1 2 1
)";
  const Molecule mol = parse_mol2(text);
  CHECK(mol.atoms[0].formal_charge == 1);
  CHECK(mol.atoms[0].partial_charge == doctest::Approx(0.9123));
  CHECK(mol.atoms[1].formal_charge == 0);
}

TEST_CASE("clean_smiles strips isolated ions") {
  CHECK(clean_smiles("CCO.[Na+]") == "CCO");
  CHECK(clean_smiles("c1ccccc1") == "c1ccccc1");
  CHECK(clean_smiles("CCO.CCN") == "CCO.CCN");
  CHECK(clean_smiles("[Cl-].c1ccccc1C(=O)O") == "c1ccccc1C(=O)O");
  CHECK_THROWS_AS(clean_smiles("[H+].[Cl-]"), EmptyAfterCleaning);
}

TEST_CASE("clean_smiles is idempotent") {
  for (const char* s : {"CCO.[Na+]", "CC(=O)[O-].[NH4+]", "c1ccccc1.CC",
                        "C[C@H](N)C(=O)O.[Cl-].[Cl-]"}) {
    const std::string once = clean_smiles(s);
    CHECK(clean_smiles(once) == once);
  }
}

TEST_CASE("heavy atom counting handles brackets and two-letter symbols") {
  CHECK(count_heavy_atoms("[Na+]") == 1);
  CHECK(count_heavy_atoms("[H+]") == 0);
  CHECK(count_heavy_atoms("[2H]") == 0);
  CHECK(count_heavy_atoms("ClCCl") == 3);
  CHECK(count_heavy_atoms("c1ccccc1") == 6);
  CHECK(count_heavy_atoms("[Se]=O") == 2);
  CHECK(count_heavy_atoms("CC(=O)[O-]") == 4);
}

TEST_CASE("vdw_radius uses Bondi values with a total fallback") {
  const RadiiTable& table = RadiiTable::bondi();
  CHECK(vdw_radius("C", table) == doctest::Approx(1.70));
  CHECK(vdw_radius("N", table) == doctest::Approx(1.55));
  CHECK(vdw_radius("Zz", table) == doctest::Approx(2.0));
}

TEST_CASE("load_dataset collects per-record failures without dying") {
  const auto dir = make_temp_dir("load");
  std::ofstream(dir / "ok.mol2") << kWaterMol2;
  std::ofstream(dir / "bad.mol2") << "not a mol2 file";
  std::ofstream(dir / "manifest.csv")
      << "id,label,mol2\nw1,1,ok.mol2\nw2,0,ok.mol2\nw3,1,bad.mol2\n"
      << "w4,0,missing.mol2\nw5,1,ok.mol2\n";

  const LoadedDataset loaded =
      load_dataset((dir / "manifest.csv").string(), dir.string());
  CHECK(loaded.records.size() == 3);
  CHECK(loaded.skipped.size() == 2);
  CHECK(loaded.label_kind == LabelKind::binary);
}

TEST_CASE("load_dataset rejects label kind mixtures") {
  const auto dir = make_temp_dir("labels");
  std::ofstream(dir / "ok.mol2") << kWaterMol2;
  std::ofstream(dir / "manifest.csv")
      << "id,label,mol2\nw1,1,ok.mol2\nw2,0.73,ok.mol2\n";
  CHECK_THROWS_AS(
      load_dataset((dir / "manifest.csv").string(), dir.string()),
      LabelKindMismatch);

  // explicit expectation triggers the same
  CHECK_THROWS_AS(load_dataset((dir / "manifest.csv").string(), dir.string(),
                               LabelExpectation::binary),
                  LabelKindMismatch);

  // as a regression manifest the same file is fine
  const LoadedDataset loaded = load_dataset((dir / "manifest.csv").string(),
                                            dir.string(),
                                            LabelExpectation::real);
  CHECK(loaded.records.size() == 2);
  CHECK(loaded.label_kind == LabelKind::real);
}

TEST_CASE("load_dataset demands the header columns") {
  const auto dir = make_temp_dir("cols");
  std::ofstream(dir / "manifest.csv") << "id,mol2\nw1,ok.mol2\n";
  CHECK_THROWS_AS(load_dataset((dir / "manifest.csv").string(), dir.string()),
                  MissingColumn);
}

TEST_CASE("a 1047-record manifest loads completely") {
  const auto dir = make_temp_dir("bulk");
  std::ofstream(dir / "w.mol2") << kWaterMol2;
  std::ofstream manifest(dir / "manifest.csv");
  manifest << "id,label,mol2\n";
  for (int i = 0; i < 1047; ++i)
    manifest << "mol" << i << ',' << (0.5 - 0.001 * i) << ",w.mol2\n";
  manifest.close();

  const LoadedDataset loaded = load_dataset((dir / "manifest.csv").string(),
                                            dir.string(),
                                            LabelExpectation::real);
  CHECK(loaded.records.size() == 1047);
  CHECK(loaded.skipped.empty());
}

TEST_CASE("atom order is preserved exactly as written") {
  const Molecule mol = test::load_fixture("chlorotheophylline8.mol2");
  CHECK(mol.atoms[0].sybyl_type == "N.am");
  CHECK(mol.atoms[10].sybyl_type == "C.2");
  CHECK(mol.atoms[12].element == "Cl");
  for (int i = 0; i < mol.atom_count(); ++i)
    CHECK(mol.atoms[static_cast<std::size_t>(i)].index == i);
}
