//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "gmc/scaffold.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "gmc/error.hpp"
#include "gmc/hash.hpp"
#include "gmc/rng.hpp"

namespace gmc {

namespace {

struct ScaffoldGraph {
  std::vector<std::string> label;  // element symbol per kept atom
  std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, order tag)
};

int order_tag(BondOrder order) {
  switch (order) {
    case BondOrder::single: return 1;
    case BondOrder::amide: return 1;  // treated as single, as in featurization
    case BondOrder::double_: return 2;
    case BondOrder::triple: return 3;
    case BondOrder::aromatic: return 4;
  }
  return 1;
}

// Edges that lie on a cycle, via bridge detection on the remaining graph.
std::vector<bool> ring_atom_flags(int n,
                                  const std::vector<std::array<int, 3>>& edges) {
  std::vector<bool> in_ring(static_cast<std::size_t>(n), false);
  // For each edge: endpoints still connected without it?
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[static_cast<std::size_t>(edges[e][0])].push_back(static_cast<int>(e));
    adj[static_cast<std::size_t>(edges[e][1])].push_back(static_cast<int>(e));
  }
  for (std::size_t skip = 0; skip < edges.size(); ++skip) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<int> stack = {edges[skip][0]};
    seen[static_cast<std::size_t>(edges[skip][0])] = true;
    bool connected = false;
    while (!stack.empty() && !connected) {
      const int cur = stack.back();
      stack.pop_back();
      for (int e : adj[static_cast<std::size_t>(cur)]) {
        if (static_cast<std::size_t>(e) == skip) continue;
        const int next =
            edges[static_cast<std::size_t>(e)][0] == cur
                ? edges[static_cast<std::size_t>(e)][1]
                : edges[static_cast<std::size_t>(e)][0];
        if (next == edges[skip][1]) {
          connected = true;
          break;
        }
        if (!seen[static_cast<std::size_t>(next)]) {
          seen[static_cast<std::size_t>(next)] = true;
          stack.push_back(next);
        }
      }
    }
    if (connected) {
      in_ring[static_cast<std::size_t>(edges[skip][0])] = true;
      in_ring[static_cast<std::size_t>(edges[skip][1])] = true;
    }
  }
  return in_ring;
}

}  // namespace

Molecule extract_scaffold(const Molecule& mol) {
  // Heavy-atom graph first.
  std::vector<int> heavy_index(mol.atoms.size(), -1);
  std::vector<int> heavy_atoms;
  for (const Atom& atom : mol.atoms) {
    if (atom.element == "H") continue;
    heavy_index[static_cast<std::size_t>(atom.index)] =
        static_cast<int>(heavy_atoms.size());
    heavy_atoms.push_back(atom.index);
  }

  std::vector<std::array<int, 3>> edges;  // a, b, order tag
  std::vector<BondOrder> edge_orders;
  for (const Bond& bond : mol.bonds) {
    const int a = heavy_index[static_cast<std::size_t>(bond.a)];
    const int b = heavy_index[static_cast<std::size_t>(bond.b)];
    if (a < 0 || b < 0) continue;
    edges.push_back({a, b, order_tag(bond.order)});
    edge_orders.push_back(bond.order);
  }

  Molecule scaffold;
  scaffold.id = mol.id;
  const int n = static_cast<int>(heavy_atoms.size());
  if (n == 0) return scaffold;
  const std::vector<bool> in_ring = ring_atom_flags(n, edges);
  if (std::none_of(in_ring.begin(), in_ring.end(), [](bool b) { return b; }))
    return scaffold;

  // Iteratively prune terminal atoms. An atom hanging off a ring via a
  // double bond is part of the scaffold (standard Murcko variant).
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (!alive[static_cast<std::size_t>(v)] ||
          in_ring[static_cast<std::size_t>(v)])
        continue;
      int degree = 0;
      int last_other = -1, last_order = 0;
      for (const auto& e : edges) {
        if (!alive[static_cast<std::size_t>(e[0])] ||
            !alive[static_cast<std::size_t>(e[1])])
          continue;
        if (e[0] == v || e[1] == v) {
          ++degree;
          last_other = e[0] == v ? e[1] : e[0];
          last_order = e[2];
        }
      }
      if (degree == 0) {
        alive[static_cast<std::size_t>(v)] = false;
        changed = true;
      } else if (degree == 1) {
        const bool keep = last_order == 2 &&
                          in_ring[static_cast<std::size_t>(last_other)];
        if (!keep) {
          alive[static_cast<std::size_t>(v)] = false;
          changed = true;
        }
      }
    }
  }

  std::vector<int> compact(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    if (!alive[static_cast<std::size_t>(v)]) continue;
    Atom atom = mol.atoms[static_cast<std::size_t>(
        heavy_atoms[static_cast<std::size_t>(v)])];
    compact[static_cast<std::size_t>(v)] = scaffold.atom_count();
    atom.index = scaffold.atom_count();
    scaffold.atoms.push_back(std::move(atom));
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int a = compact[static_cast<std::size_t>(edges[e][0])];
    const int b = compact[static_cast<std::size_t>(edges[e][1])];
    if (a < 0 || b < 0) continue;
    scaffold.bonds.push_back({a, b, edge_orders[e]});
  }
  return scaffold;
}

std::string murcko_scaffold(const Molecule& mol) {
  const Molecule core = extract_scaffold(mol);
  if (core.atoms.empty()) return "";

  ScaffoldGraph sg;
  for (const Atom& atom : core.atoms) sg.label.push_back(atom.element);
  sg.adj.resize(sg.label.size());
  int kept_edges = 0;
  for (const Bond& bond : core.bonds) {
    sg.adj[static_cast<std::size_t>(bond.a)].push_back(
        {bond.b, order_tag(bond.order)});
    sg.adj[static_cast<std::size_t>(bond.b)].push_back(
        {bond.a, order_tag(bond.order)});
    ++kept_edges;
  }

  // Weisfeiler-Lehman refinement: atom-count rounds of hashing each vertex
  // with its sorted (bond order, neighbor label) multiset.
  const int m = static_cast<int>(sg.label.size());
  std::vector<std::uint64_t> color(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v)
    color[static_cast<std::size_t>(v)] = fnv1a(sg.label[static_cast<std::size_t>(v)]);

  for (int round = 0; round < m; ++round) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(m));
    for (int v = 0; v < m; ++v) {
      std::vector<std::pair<int, std::uint64_t>> env;
      for (const auto& [u, order] : sg.adj[static_cast<std::size_t>(v)])
        env.push_back({order, color[static_cast<std::size_t>(u)]});
      std::sort(env.begin(), env.end());
      std::ostringstream os;
      os << color[static_cast<std::size_t>(v)];
      for (const auto& [order, c] : env) os << '|' << order << ':' << c;
      next[static_cast<std::size_t>(v)] = fnv1a(os.str());
    }
    color = std::move(next);
  }

  std::sort(color.begin(), color.end());
  std::ostringstream os;
  os << m << ';' << kept_edges;
  for (std::uint64_t c : color) os << ';' << c;
  return to_hex(fnv1a(os.str()));
}

std::string_view partition_name(Partition p) {
  switch (p) {
    case Partition::train: return "train";
    case Partition::val: return "val";
    case Partition::test: return "test";
  }
  return "train";
}

SplitAssignment scaffold_split(const std::vector<DatasetRecord>& records,
                               const std::array<double, 3>& ratios,
                               std::uint64_t seed) {
  if (records.empty()) throw EmptyDataset("cannot split an empty dataset");
  const double total = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(total - 1.0) > 1e-9)
    throw RangeError("split ratios must sum to 1");

  SplitAssignment out;
  out.seed = seed;
  out.ratios = ratios;
  out.partition.resize(records.size(), Partition::train);
  out.scaffold.resize(records.size());

  // Group by scaffold key, in first-occurrence order.
  std::map<std::string, std::vector<std::size_t>> groups_by_key;
  std::vector<std::string> key_order;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string key = murcko_scaffold(records[i].molecule);
    out.scaffold[i] = key;
    auto [it, inserted] = groups_by_key.try_emplace(key);
    if (inserted) key_order.push_back(key);
    it->second.push_back(i);
  }

  rng::Engine eng(rng::derive(seed, 0x5c));
  rng::shuffle(key_order, eng);

  const auto n = static_cast<double>(records.size());
  std::array<double, 3> filled{0.0, 0.0, 0.0};
  for (const std::string& key : key_order) {
    const auto& members = groups_by_key[key];
    // Largest-deficit partition wins; ties resolve train > val > test.
    int best = 0;
    double best_deficit = ratios[0] - filled[0] / n;
    for (int p = 1; p < 3; ++p) {
      const double deficit = ratios[static_cast<std::size_t>(p)] -
                             filled[static_cast<std::size_t>(p)] / n;
      if (deficit > best_deficit) {
        best = p;
        best_deficit = deficit;
      }
    }
    for (std::size_t i : members)
      out.partition[i] = static_cast<Partition>(best);
    filled[static_cast<std::size_t>(best)] += static_cast<double>(members.size());
  }
  return out;
}

std::string split_to_csv(const std::vector<DatasetRecord>& records,
                         const SplitAssignment& split) {
  std::ostringstream os;
  os << "id,partition,seed,scaffold_key\n";
  for (std::size_t i = 0; i < records.size(); ++i)
    os << records[i].id << ',' << partition_name(split.partition[i]) << ','
       << split.seed << ',' << split.scaffold[i] << '\n';
  return os.str();
}

}  // namespace gmc
