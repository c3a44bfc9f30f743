//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/chem/canonical.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace msbench::chem {
namespace {

using AtomKey = std::tuple<int, int, int, int, int, int>;

AtomKey atom_key(const Molecule &mol, int a) {
  const Atom &atom = mol.atom(a);
  return { atom.element.atomic_number(), atom.isotope.value_or(0),
           atom.formal_charge,           mol.degree(a),
           mol.total_h(a),               mol.is_ring_atom(a) ? 1 : 0 };
}

// A partition is stored as cls[atom] = index of the first position of the
// atom's cell in sorted order, so singletons carry their final rank.
int assign_cells(const std::vector<int> &order,
                 const std::function<bool(int, int)> &same, std::vector<int> &cls) {
  int cells = 0;
  int start = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || !same(order[i - 1], order[i])) {
      start = static_cast<int>(i);
      ++cells;
    }
    cls[order[i]] = start;
  }
  return cells;
}

int initial_partition(const Molecule &mol, std::vector<int> &cls) {
  const int n = mol.num_atoms();
  std::vector<AtomKey> keys(n);
  for (int a = 0; a < n; ++a)
    keys[a] = atom_key(mol, a);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return keys[x] < keys[y]; });
  cls.assign(n, 0);
  return assign_cells(order, [&](int x, int y) { return keys[x] == keys[y]; }, cls);
}

// Splits cells by the sorted multiset of (neighbor cell, bond label) until
// the partition is equitable.
void refine(const Molecule &mol, std::vector<int> &cls) {
  const int n = mol.num_atoms();
  int cells = 0;
  {
    std::vector<int> tmp(cls);
    std::sort(tmp.begin(), tmp.end());
    cells = static_cast<int>(std::unique(tmp.begin(), tmp.end()) - tmp.begin());
  }
  std::vector<std::vector<std::pair<int, int>>> sig(n);
  std::vector<int> order(n);
  while (cells < n) {
    for (int a = 0; a < n; ++a) {
      sig[a].clear();
      for (const Neighbor &nb: mol.neighbors(a))
        sig[a].emplace_back(cls[nb.atom], static_cast<int>(mol.bond_label(nb.bond)));
      std::sort(sig[a].begin(), sig[a].end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      if (cls[x] != cls[y])
        return cls[x] < cls[y];
      return sig[x] < sig[y];
    });
    std::vector<int> next(n);
    const int next_cells = assign_cells(
        order, [&](int x, int y) { return cls[x] == cls[y] && sig[x] == sig[y]; },
        next);
    cls = std::move(next);
    if (next_cells == cells)
      break;
    cells = next_cells;
  }
}

bool is_automorphism(const Molecule &mol, const std::vector<int> &g) {
  for (int a = 0; a < mol.num_atoms(); ++a) {
    if (atom_key(mol, a) != atom_key(mol, g[a]))
      return false;
  }
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    const int img = mol.find_bond(g[bond.begin], g[bond.end]);
    if (img < 0 || mol.bond_label(img) != mol.bond_label(b))
      return false;
  }
  return true;
}

// Individualization-refinement search for the lexicographically smallest
// SMILES over all discrete refinements, pruned by discovered automorphisms.
class Canonicalizer {
public:
  explicit Canonicalizer(const Molecule &mol): mol_(mol) { }

  void run() {
    std::vector<int> cls;
    initial_partition(mol_, cls);
    std::vector<int> prefix;
    search(std::move(cls), prefix);
  }

  const std::string &smiles() const { return best_; }
  const std::vector<int> &ranks() const { return best_ranks_; }

private:
  static constexpr long kLeafBudget = 512;

  void search(std::vector<int> cls, std::vector<int> &prefix) {
    refine(mol_, cls);
    const int n = mol_.num_atoms();

    std::vector<int> size(n, 0);
    for (const int c: cls)
      ++size[c];
    int target = -1;
    for (int c = 0; c < n; ++c) {
      if (size[c] > 1) {
        target = c;
        break;
      }
    }
    if (target < 0) {
      leaf(cls);
      return;
    }

    std::vector<int> explored;
    for (int m = 0; m < n; ++m) {
      if (cls[m] != target)
        continue;
      if (!explored.empty() && leaves_ >= kLeafBudget)
        break;
      if (!explored.empty() && same_orbit(m, explored, prefix))
        continue;
      std::vector<int> child(cls);
      for (int o = 0; o < n; ++o) {
        if (cls[o] == target && o != m)
          child[o] = target + 1;
      }
      prefix.push_back(m);
      search(std::move(child), prefix);
      prefix.pop_back();
      explored.push_back(m);
    }
  }

  void leaf(const std::vector<int> &ranks) {
    ++leaves_;
    std::vector<int> order;
    std::string s = write_smiles(mol_, ranks, &order);
    if (first_order_.empty()) {
      first_ = s;
      first_order_ = order;
    } else if (s == first_) {
      record_automorphism(first_order_, order);
    }
    if (best_order_.empty() || s < best_) {
      best_ = std::move(s);
      best_order_ = std::move(order);
      best_ranks_ = ranks;
    } else if (s == best_) {
      record_automorphism(best_order_, order);
    }
  }

  void record_automorphism(const std::vector<int> &from, const std::vector<int> &to) {
    std::vector<int> g(mol_.num_atoms());
    for (std::size_t i = 0; i < from.size(); ++i)
      g[from[i]] = to[i];
    bool identity = true;
    for (int a = 0; a < mol_.num_atoms() && identity; ++a)
      identity = g[a] == a;
    if (!identity && is_automorphism(mol_, g))
      autos_.push_back(std::move(g));
  }

  // Orbits of the subgroup generated by known automorphisms that fix the
  // individualized prefix pointwise.
  bool same_orbit(int m, const std::vector<int> &explored,
                  const std::vector<int> &prefix) const {
    const int n = mol_.num_atoms();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x)
        x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto &g: autos_) {
      const bool fixes = std::all_of(prefix.begin(), prefix.end(),
                                     [&](int p) { return g[p] == p; });
      if (!fixes)
        continue;
      for (int a = 0; a < n; ++a)
        parent[find(a)] = find(g[a]);
    }
    const int root = find(m);
    return std::any_of(explored.begin(), explored.end(),
                       [&](int e) { return find(e) == root; });
  }

  const Molecule &mol_;
  std::string first_;
  std::vector<int> first_order_;
  std::string best_;
  std::vector<int> best_order_;
  std::vector<int> best_ranks_;
  std::vector<std::vector<int>> autos_;
  long leaves_ = 0;
};

} // namespace

std::vector<int> canonical_ranks(const Molecule &mol) {
  if (!mol.perceived())
    throw std::invalid_argument("canonical_ranks requires a perceived molecule");
  if (mol.num_atoms() == 0)
    return {};
  Canonicalizer c(mol);
  c.run();
  return c.ranks();
}

std::string canonical_smiles(const Molecule &mol) {
  if (!mol.perceived())
    throw std::invalid_argument("canonical_smiles requires a perceived molecule");
  int ncomp = 0;
  const std::vector<int> comp = mol.component_ids(&ncomp);
  if (ncomp <= 1) {
    if (mol.num_atoms() == 0)
      return {};
    Canonicalizer c(mol);
    c.run();
    return c.smiles();
  }

  std::vector<std::string> parts;
  for (int k = 0; k < ncomp; ++k) {
    std::vector<int> ids;
    for (int a = 0; a < mol.num_atoms(); ++a) {
      if (comp[a] == k)
        ids.push_back(a);
    }
    const Molecule sub = mol.subgraph(ids);
    Canonicalizer c(sub);
    c.run();
    parts.push_back(c.smiles());
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto &p: parts) {
    if (!out.empty())
      out += '.';
    out += p;
  }
  return out;
}

} // namespace msbench::chem
