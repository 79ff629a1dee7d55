//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "testutil.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gmc/chem_io.hpp"
#include "gmc/error.hpp"

namespace fs = std::filesystem;

namespace gmc::test {

namespace {

constexpr double kPi = 3.14159265358979323846;

int add_atom(Molecule& mol, const std::string& element, const std::string& sybyl,
             double x, double y, double z) {
  Atom atom;
  atom.index = mol.atom_count();
  atom.element = element;
  atom.sybyl_type = sybyl;
  atom.position = {x, y, z};
  mol.atoms.push_back(std::move(atom));
  return mol.atoms.back().index;
}

void add_bond(Molecule& mol, int a, int b, BondOrder order = BondOrder::single) {
  mol.bonds.push_back({a, b, order});
}

// Regular n-ring in the z=0 plane, bond length `side`, centered at (cx, cy).
std::vector<int> add_ring(Molecule& mol, int n, double side,
                          const std::vector<std::pair<std::string, std::string>>& types,
                          double cx = 0.0, double cy = 0.0,
                          BondOrder order = BondOrder::single) {
  const double radius = side / (2.0 * std::sin(kPi / n));
  std::vector<int> ids;
  for (int i = 0; i < n; ++i) {
    const double ang = 2.0 * kPi * i / n;
    const auto& [el, sybyl] = types[static_cast<std::size_t>(i) % types.size()];
    ids.push_back(add_atom(mol, el, sybyl, cx + radius * std::cos(ang),
                           cy + radius * std::sin(ang), 0.0));
  }
  for (int i = 0; i < n; ++i)
    add_bond(mol, ids[static_cast<std::size_t>(i)],
             ids[static_cast<std::size_t>((i + 1) % n)], order);
  return ids;
}

// H (or any single substituent) radially outward from a ring atom.
int add_radial(Molecule& mol, int ring_atom, double cx, double cy, double dist,
               const std::string& element, const std::string& sybyl) {
  const auto& p = mol.atoms[static_cast<std::size_t>(ring_atom)].position;
  const double dx = p[0] - cx, dy = p[1] - cy;
  const double len = std::sqrt(dx * dx + dy * dy);
  const int id = add_atom(mol, element, sybyl, p[0] + dx / len * dist,
                          p[1] + dy / len * dist, p[2]);
  add_bond(mol, ring_atom, id);
  return id;
}

}  // namespace

Molecule water() {
  Molecule mol;
  mol.id = "water";
  const int o = add_atom(mol, "O", "O.3", 0.0, 0.0, 0.0);
  const int h1 = add_atom(mol, "H", "H", 0.9572, 0.0, 0.0);
  const int h2 = add_atom(mol, "H", "H", -0.24, 0.9266, 0.0);
  add_bond(mol, o, h1);
  add_bond(mol, o, h2);
  return mol;
}

Molecule benzene() {
  Molecule mol;
  mol.id = "benzene";
  const auto ring =
      add_ring(mol, 6, 1.39, {{"C", "C.ar"}}, 0.0, 0.0, BondOrder::aromatic);
  for (int c : ring) add_radial(mol, c, 0.0, 0.0, 1.09, "H", "H");
  return mol;
}

Molecule toluene() {
  Molecule mol;
  mol.id = "toluene";
  const auto ring =
      add_ring(mol, 6, 1.39, {{"C", "C.ar"}}, 0.0, 0.0, BondOrder::aromatic);
  const int methyl = add_radial(mol, ring[0], 0.0, 0.0, 1.51, "C", "C.3");
  for (std::size_t i = 1; i < ring.size(); ++i)
    add_radial(mol, ring[i], 0.0, 0.0, 1.09, "H", "H");
  // methyl hydrogens
  const auto& c = mol.atoms[static_cast<std::size_t>(methyl)].position;
  const int h1 = add_atom(mol, "H", "H", c[0] + 1.04, c[1], 0.33);
  const int h2 = add_atom(mol, "H", "H", c[0] - 0.52, c[1] + 0.9, 0.33);
  const int h3 = add_atom(mol, "H", "H", c[0] - 0.52, c[1] - 0.9, 0.33);
  add_bond(mol, methyl, h1);
  add_bond(mol, methyl, h2);
  add_bond(mol, methyl, h3);
  return mol;
}

Molecule ethane() {
  Molecule mol;
  mol.id = "ethane";
  const int c1 = add_atom(mol, "C", "C.3", 0.0, 0.0, 0.0);
  const int c2 = add_atom(mol, "C", "C.3", 0.0, 0.0, 1.54);
  add_bond(mol, c1, c2);
  for (int k = 0; k < 3; ++k) {
    const double ang = 2.0 * kPi * k / 3.0;
    const int ha = add_atom(mol, "H", "H", 1.02 * std::cos(ang),
                            1.02 * std::sin(ang), -0.39);
    add_bond(mol, c1, ha);
    const int hb = add_atom(mol, "H", "H", 1.02 * std::cos(ang + kPi / 3.0),
                            1.02 * std::sin(ang + kPi / 3.0), 1.93);
    add_bond(mol, c2, hb);
  }
  return mol;
}

Molecule butadiene() {
  Molecule mol;
  mol.id = "butadiene";
  // planar s-trans zigzag
  const int c1 = add_atom(mol, "C", "C.2", 0.0, 0.0, 0.0);
  const int c2 = add_atom(mol, "C", "C.2", 1.34, 0.3, 0.0);
  const int c3 = add_atom(mol, "C", "C.2", 2.32, -0.65, 0.0);
  const int c4 = add_atom(mol, "C", "C.2", 3.66, -0.35, 0.0);
  add_bond(mol, c1, c2, BondOrder::double_);
  add_bond(mol, c2, c3, BondOrder::single);
  add_bond(mol, c3, c4, BondOrder::double_);
  const double hx[6][3] = {{-0.6, 0.9, 0.0},  {-0.5, -0.95, 0.0}, {1.5, 1.37, 0.0},
                           {2.1, -1.71, 0.0}, {4.3, -1.2, 0.0},   {4.1, 0.63, 0.0}};
  const int owners[6] = {c1, c1, c2, c3, c4, c4};
  for (int k = 0; k < 6; ++k) {
    const int h = add_atom(mol, "H", "H", hx[k][0], hx[k][1], hx[k][2]);
    add_bond(mol, owners[k], h);
  }
  return mol;
}

Molecule propane() {
  Molecule mol;
  mol.id = "propane";
  const int c1 = add_atom(mol, "C", "C.3", 0.0, 0.0, 0.0);
  const int c2 = add_atom(mol, "C", "C.3", 1.26, 0.88, 0.0);
  const int c3 = add_atom(mol, "C", "C.3", 2.52, 0.0, 0.0);
  add_bond(mol, c1, c2);
  add_bond(mol, c2, c3);
  const double hx[8][3] = {{-0.9, 0.6, 0.0},   {0.0, -0.65, 0.88}, {0.0, -0.65, -0.88},
                           {1.26, 1.53, 0.88}, {1.26, 1.53, -0.88}, {3.42, 0.6, 0.0},
                           {2.52, -0.65, 0.88}, {2.52, -0.65, -0.88}};
  const int owners[8] = {c1, c1, c1, c2, c2, c3, c3, c3};
  for (int k = 0; k < 8; ++k) {
    const int h = add_atom(mol, "H", "H", hx[k][0], hx[k][1], hx[k][2]);
    add_bond(mol, owners[k], h);
  }
  return mol;
}

Molecule biphenyl() {
  Molecule mol;
  mol.id = "biphenyl";
  const auto ring1 =
      add_ring(mol, 6, 1.39, {{"C", "C.ar"}}, 0.0, 0.0, BondOrder::aromatic);
  const auto ring2 =
      add_ring(mol, 6, 1.39, {{"C", "C.ar"}}, 4.26, 0.0, BondOrder::aromatic);
  add_bond(mol, ring1[0], ring2[3]);  // ring1 atom at +x meets ring2 atom at -x
  return mol;
}

Molecule naphthalene() {
  Molecule mol;
  mol.id = "naphthalene";
  // two fused hexagons sharing the vertical edge at x = 0
  const double s = 1.39;
  const double h = s * std::sqrt(3.0) / 2.0;
  const int a0 = add_atom(mol, "C", "C.ar", 0.0, s / 2, 0.0);
  const int a1 = add_atom(mol, "C", "C.ar", 0.0, -s / 2, 0.0);
  const int l0 = add_atom(mol, "C", "C.ar", -h, s, 0.0);
  const int l1 = add_atom(mol, "C", "C.ar", -2 * h, s / 2, 0.0);
  const int l2 = add_atom(mol, "C", "C.ar", -2 * h, -s / 2, 0.0);
  const int l3 = add_atom(mol, "C", "C.ar", -h, -s, 0.0);
  const int r0 = add_atom(mol, "C", "C.ar", h, s, 0.0);
  const int r1 = add_atom(mol, "C", "C.ar", 2 * h, s / 2, 0.0);
  const int r2 = add_atom(mol, "C", "C.ar", 2 * h, -s / 2, 0.0);
  const int r3 = add_atom(mol, "C", "C.ar", h, -s, 0.0);
  const int shared[2] = {a0, a1};
  const int left[4] = {l0, l1, l2, l3};
  const int right[4] = {r0, r1, r2, r3};
  add_bond(mol, shared[0], shared[1], BondOrder::aromatic);
  add_bond(mol, shared[0], left[0], BondOrder::aromatic);
  add_bond(mol, left[0], left[1], BondOrder::aromatic);
  add_bond(mol, left[1], left[2], BondOrder::aromatic);
  add_bond(mol, left[2], left[3], BondOrder::aromatic);
  add_bond(mol, left[3], shared[1], BondOrder::aromatic);
  add_bond(mol, shared[0], right[0], BondOrder::aromatic);
  add_bond(mol, right[0], right[1], BondOrder::aromatic);
  add_bond(mol, right[1], right[2], BondOrder::aromatic);
  add_bond(mol, right[2], right[3], BondOrder::aromatic);
  add_bond(mol, right[3], shared[1], BondOrder::aromatic);
  return mol;
}

Molecule single_atom(const std::string& element, const std::string& sybyl) {
  Molecule mol;
  mol.id = "single_" + element;
  add_atom(mol, element, sybyl, 0.0, 0.0, 0.0);
  return mol;
}

std::string fixture_path(const std::string& name) {
  const char* dir = std::getenv("GMC_TEST_DATA_DIR");
#ifdef GMC_TEST_DATA_DIR_DEFAULT
  if (dir == nullptr) dir = GMC_TEST_DATA_DIR_DEFAULT;
#endif
  if (dir == nullptr)
    throw Error("GMC_TEST_DATA_DIR is not set");
  return (fs::path(dir) / name).string();
}

Molecule load_fixture(const std::string& name) {
  std::ifstream is(fixture_path(name));
  if (!is) throw Error("cannot open fixture '" + name + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_mol2(buf.str());
}

Molecule random_molecule(rng::Engine& eng, int min_atoms, int max_atoms) {
  static const std::vector<std::pair<std::string, std::string>> kinds = {
      {"C", "C.3"}, {"C", "C.ar"}, {"H", "H"},    {"O", "O.3"}, {"O", "O.2"},
      {"N", "N.3"}, {"N", "N.ar"}, {"P", "P.3"},  {"Cl", "Cl"}, {"F", "F"},
      {"Br", "Br"}, {"S", "S.3"},  {"Si", "Si.3"}, {"I", "I"},  {"Se", "Se"},
      {"B", "B.2"}};
  static const BondOrder orders[] = {BondOrder::single, BondOrder::double_,
                                     BondOrder::triple, BondOrder::aromatic,
                                     BondOrder::amide};

  Molecule mol;
  mol.id = "random";
  const int n = min_atoms +
                static_cast<int>(rng::below(eng, static_cast<std::uint64_t>(
                                                     max_atoms - min_atoms + 1)));
  for (int i = 0; i < n; ++i) {
    const auto& [el, sybyl] = kinds[rng::below(eng, kinds.size())];
    add_atom(mol, el, sybyl, rng::uniform(eng, 0.0, 8.0),
             rng::uniform(eng, 0.0, 8.0), rng::uniform(eng, 0.0, 8.0));
  }
  // random spanning tree keeps it connected, plus a few extra edges
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(rng::below(eng, static_cast<std::uint64_t>(i)));
    add_bond(mol, i, j, orders[rng::below(eng, 5)]);
  }
  const int extra = static_cast<int>(rng::below(eng, 3));
  for (int k = 0; k < extra && n > 2; ++k) {
    const int a = static_cast<int>(rng::below(eng, static_cast<std::uint64_t>(n)));
    const int b = static_cast<int>(rng::below(eng, static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    bool dup = false;
    for (const Bond& bond : mol.bonds)
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) dup = true;
    if (!dup) add_bond(mol, a, b, orders[rng::below(eng, 5)]);
  }
  return mol;
}

void rigid_transform(Molecule& mol, rng::Engine& eng) {
  double q[4];
  double norm = 0.0;
  for (double& v : q) {
    v = rng::uniform(eng, -1.0, 1.0);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : q) v /= norm;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  const double rot[3][3] = {
      {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
      {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
      {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
  const double t[3] = {rng::uniform(eng, -5.0, 5.0), rng::uniform(eng, -5.0, 5.0),
                       rng::uniform(eng, -5.0, 5.0)};
  for (Atom& atom : mol.atoms) {
    const auto p = atom.position;
    for (int r = 0; r < 3; ++r)
      atom.position[static_cast<std::size_t>(r)] =
          rot[r][0] * p[0] + rot[r][1] * p[1] + rot[r][2] * p[2] + t[r];
  }
}

namespace {

struct FamilySpec {
  int ring_size;                       // 0 = acyclic chain family
  std::vector<int> hetero_positions;   // indices into the ring
  std::vector<std::pair<std::string, std::string>> hetero;  // element, sybyl
};

// Every family carries at most one ring N/O so that, combined with the
// staggered decoration targets below, each family (and therefore each
// scaffold-split partition) holds both labels.
std::vector<FamilySpec> corpus_families() {
  std::vector<FamilySpec> families;
  const std::vector<std::pair<std::string, std::string>> none;
  for (int size : {5, 6, 7, 8}) {
    families.push_back({size, {}, none});
    families.push_back({size, {0}, {{"N", "N.3"}}});
    families.push_back({size, {0}, {{"O", "O.3"}}});
    families.push_back({size, {0}, {{"S", "S.3"}}});
    families.push_back({size, {0, 2}, {{"S", "S.3"}, {"S", "S.3"}}});
    families.push_back({size, {0, 2}, {{"N", "N.3"}, {"S", "S.3"}}});
  }
  families.push_back({0, {}, none});  // acyclic chains, scaffold key ""
  return families;
}

struct SubSpec {
  std::vector<std::pair<std::string, std::string>> chain;
  int polar;  // N+O atoms it contributes
};

const std::vector<SubSpec>& plain_subs() {
  static const std::vector<SubSpec> subs = {
      {{{"C", "C.3"}}, 0},
      {{{"C", "C.3"}, {"C", "C.3"}}, 0},
      {{{"C", "C.3"}, {"C", "C.3"}, {"C", "C.3"}}, 0},
      {{{"Cl", "Cl"}}, 0},
      {{{"F", "F"}}, 0},
  };
  return subs;
}

const std::vector<SubSpec>& polar_subs() {
  static const std::vector<SubSpec> subs = {
      {{{"O", "O.3"}}, 1},
      {{{"N", "N.3"}}, 1},
      {{{"C", "C.3"}, {"O", "O.3"}}, 1},
      {{{"C", "C.3"}, {"N", "N.3"}}, 1},
  };
  return subs;
}

// chain radiating outward from `anchor`, zigzagging in z
int grow_chain(Molecule& mol, int anchor, double cx, double cy,
               const SubSpec& sub) {
  const auto& base = mol.atoms[static_cast<std::size_t>(anchor)].position;
  double dx = base[0] - cx, dy = base[1] - cy;
  const double len = std::sqrt(dx * dx + dy * dy);
  if (len < 1e-9) {
    dx = 1.0;
    dy = 0.0;
  } else {
    dx /= len;
    dy /= len;
  }
  int prev = anchor;
  const double step = std::sqrt(1.52 * 1.52 - 0.4 * 0.4);
  for (std::size_t k = 0; k < sub.chain.size(); ++k) {
    const auto& [el, sybyl] = sub.chain[k];
    const double z = (k % 2 == 0) ? 0.4 : 0.0;
    const int id = add_atom(mol, el, sybyl,
                            base[0] + dx * step * static_cast<double>(k + 1),
                            base[1] + dy * step * static_cast<double>(k + 1), z);
    add_bond(mol, prev, id);
    prev = id;
  }
  return prev;
}

}  // namespace

std::vector<DatasetRecord> synthetic_corpus(const CorpusOptions& options) {
  const std::vector<FamilySpec> families = corpus_families();
  const int per_family = static_cast<int>(
      (options.n_molecules + families.size() - 1) / families.size());

  std::vector<DatasetRecord> records;
  records.reserve(static_cast<std::size_t>(options.n_molecules));

  for (std::size_t f = 0; f < families.size(); ++f) {
    for (int v = 0; v < per_family; ++v) {
      if (static_cast<int>(records.size()) >= options.n_molecules) break;
      const FamilySpec& family = families[f];
      rng::Engine eng(
          rng::derive(options.seed, f * 1009 + static_cast<std::uint64_t>(v)));

      Molecule mol;
      char id[32];
      std::snprintf(id, sizeof(id), "mol_f%02zu_v%02d", f, v);
      mol.id = id;

      std::vector<int> anchors;
      if (family.ring_size > 0) {
        std::vector<std::pair<std::string, std::string>> types(
            static_cast<std::size_t>(family.ring_size), {"C", "C.3"});
        for (std::size_t h = 0; h < family.hetero_positions.size(); ++h)
          types[static_cast<std::size_t>(family.hetero_positions[h])] =
              family.hetero[h];
        const double side = 1.52;
        const double radius =
            side / (2.0 * std::sin(kPi / family.ring_size));
        for (int i = 0; i < family.ring_size; ++i) {
          const double ang = 2.0 * kPi * i / family.ring_size;
          const auto& [el, sybyl] = types[static_cast<std::size_t>(i)];
          anchors.push_back(add_atom(mol, el, sybyl, radius * std::cos(ang),
                                     radius * std::sin(ang), 0.0));
        }
        for (int i = 0; i < family.ring_size; ++i)
          add_bond(mol, anchors[static_cast<std::size_t>(i)],
                   anchors[static_cast<std::size_t>((i + 1) % family.ring_size)]);
      } else {
        // acyclic backbone of 4..7 carbons
        const int len = 4 + static_cast<int>(rng::below(eng, 4));
        int prev = -1;
        for (int i = 0; i < len; ++i) {
          const int id_atom =
              add_atom(mol, "C", "C.3", 1.45 * i, (i % 2) * 0.55, 0.0);
          if (prev >= 0) add_bond(mol, prev, id_atom);
          anchors.push_back(id_atom);
          prev = id_atom;
        }
      }

      // Decorations target a total N/O count of (f + v) % 4; cycling over
      // both indices leaves labels mixed within every family and across any
      // leading slice of the corpus.
      int ring_polar = 0;
      for (const auto& [el, sybyl] : family.hetero)
        if (el == "N" || el == "O") ++ring_polar;
      const int target_total = static_cast<int>((f + static_cast<std::size_t>(v)) % 4);
      const int extra_polar = std::max(0, target_total - ring_polar);
      const int n_subs =
          std::max(extra_polar, 2 + static_cast<int>(rng::below(eng, 2)));
      std::vector<int> positions(anchors.size());
      for (std::size_t i = 0; i < anchors.size(); ++i)
        positions[i] = anchors[i];
      rng::shuffle(positions, eng);

      int polar_placed = 0;
      for (int s = 0; s < n_subs && s < static_cast<int>(positions.size()); ++s) {
        const bool place_polar = polar_placed < extra_polar;
        const SubSpec& sub =
            place_polar
                ? polar_subs()[rng::below(eng, polar_subs().size())]
                : plain_subs()[rng::below(eng, plain_subs().size())];
        const int anchor = positions[static_cast<std::size_t>(s)];
        // rings: radiate from the center; chains: grow perpendicular
        const double cx = family.ring_size > 0
                              ? 0.0
                              : mol.atoms[static_cast<std::size_t>(anchor)]
                                    .position[0];
        const double cy = family.ring_size > 0 ? 0.0 : -10.0;
        grow_chain(mol, anchor, cx, cy, sub);
        if (place_polar) ++polar_placed;
      }

      int polar_total = 0;
      int heavy = 0;
      for (const Atom& atom : mol.atoms) {
        if (atom.element == "N" || atom.element == "O") ++polar_total;
        if (atom.element != "H") ++heavy;
      }

      DatasetRecord rec;
      rec.id = mol.id;
      if (options.regression) {
        rec.label_kind = LabelKind::real;
        rec.label = 1.0 - 0.5 * polar_total + 0.05 * heavy +
                    rng::uniform(eng, -0.05, 0.05);
      } else {
        rec.label_kind = LabelKind::binary;
        rec.label = polar_total <= 1 ? 1.0 : 0.0;
      }
      rec.molecule = std::move(mol);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::string write_corpus(const std::vector<DatasetRecord>& records,
                         const std::string& dir) {
  fs::create_directories(fs::path(dir) / "mol2");
  std::ostringstream manifest;
  manifest << "id,label,mol2\n";
  for (const DatasetRecord& rec : records) {
    const std::string file = rec.id + ".mol2";
    std::ofstream os(fs::path(dir) / "mol2" / file);
    os << write_mol2(rec.molecule);
    if (rec.label_kind == LabelKind::binary) {
      manifest << rec.id << ',' << (rec.label > 0.5 ? 1 : 0) << ',' << file
               << '\n';
    } else {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", rec.label);
      manifest << rec.id << ',' << buf << ',' << file << '\n';
    }
  }
  const std::string manifest_path = (fs::path(dir) / "manifest.csv").string();
  std::ofstream os(manifest_path);
  os << manifest.str();
  return manifest_path;
}

}  // namespace gmc::test
