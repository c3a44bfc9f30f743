//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "chem/editor.h"
#include "msbench/chem/molecule.h"

namespace msbench::chem {
namespace {

// Bridges are exactly the non-ring bonds.
std::vector<bool> find_ring_bonds(const Molecule &mol) {
  const int n = mol.num_atoms();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> ring(mol.num_bonds(), true);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> stack;

  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0)
      continue;
    disc[root] = low[root] = timer++;
    stack.push_back({ root, -1, 0 });
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto nbrs = mol.neighbors(f.atom);
      if (f.next < nbrs.size()) {
        const Neighbor nb = nbrs[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({ nb.atom, nb.bond, 0 });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          const int parent = stack.back().atom;
          low[parent] = std::min(low[parent], low[done.atom]);
          if (low[done.atom] > disc[parent])
            ring[done.parent_bond] = false;
        }
      }
    }
  }
  return ring;
}

int smallest_valence_at_least(const Atom &atom, int needed) {
  std::array<int, 4> buf {};
  const int n = allowed_valences(atom.element, atom.formal_charge, buf);
  for (int i = 0; i < n; ++i) {
    if (buf[i] >= needed)
      return buf[i];
  }
  return -1;
}

bool has_valence_model(const Atom &atom) {
  return !atom.element.default_valences().empty();
}

std::string atom_desc(const Molecule &mol, int idx) {
  return std::string(mol.atom(idx).element.symbol()) + " atom "
         + std::to_string(idx);
}

// Perfect matching over the atoms that must receive a double bond, found by
// backtracking with a fewest-choices-first vertex order.
class KekuleMatcher {
public:
  KekuleMatcher(const Molecule &mol, const std::vector<bool> &need)
      : mol_(mol), need_(need), mate_(mol.num_atoms(), -1) {
    for (int a = 0; a < mol.num_atoms(); ++a) {
      if (need_[a])
        pending_.push_back(a);
    }
  }

  bool solve() { return search(static_cast<int>(pending_.size())); }

  int mate(int atom) const { return mate_[atom]; }

private:
  bool candidate(const Neighbor &nb) const {
    return need_[nb.atom] && mate_[nb.atom] < 0
           && mol_.bond(nb.bond).order == BondOrder::kAromatic;
  }

  bool search(int remaining) {
    if (remaining == 0)
      return true;
    if (++steps_ > kMaxSteps)
      return false;

    int best = -1;
    int best_count = 1 << 30;
    for (const int a: pending_) {
      if (mate_[a] >= 0)
        continue;
      int count = 0;
      for (const Neighbor &nb: mol_.neighbors(a))
        count += candidate(nb) ? 1 : 0;
      if (count < best_count) {
        best = a;
        best_count = count;
        if (count == 0)
          return false;
      }
    }

    for (const Neighbor &nb: mol_.neighbors(best)) {
      if (!candidate(nb))
        continue;
      mate_[best] = nb.atom;
      mate_[nb.atom] = best;
      if (search(remaining - 2))
        return true;
      mate_[best] = mate_[nb.atom] = -1;
    }
    return false;
  }

  static constexpr long kMaxSteps = 2'000'000;

  const Molecule &mol_;
  const std::vector<bool> &need_;
  std::vector<int> mate_;
  std::vector<int> pending_;
  long steps_ = 0;
};

// An isolated aromatic cycle whose pi system is made only of ring double
// bonds and lone pairs must hold 4n+2 electrons. Fused systems and rings
// carrying exocyclic double bonds are accepted once they kekulize.
void check_isolated_aromatic_rings(const Molecule &mol,
                                   const std::vector<bool> &was_aromatic_bond) {
  const int n = mol.num_atoms();
  std::vector<int> comp(n, -1);
  for (int start = 0; start < n; ++start) {
    if (!mol.atom(start).aromatic || comp[start] >= 0)
      continue;
    std::vector<int> members { start };
    comp[start] = start;
    int edges2 = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (const Neighbor &nb: mol.neighbors(members[i])) {
        if (!was_aromatic_bond[nb.bond])
          continue;
        ++edges2;
        if (comp[nb.atom] < 0) {
          comp[nb.atom] = start;
          members.push_back(nb.atom);
        }
      }
    }
    const int edges = edges2 / 2;
    if (edges != static_cast<int>(members.size()))
      continue;  // not a single cycle

    int pi = 0;
    bool any_exo = false;
    for (const int a: members) {
      bool ring_double = false;
      bool exo_double = false;
      for (const Neighbor &nb: mol.neighbors(a)) {
        if (mol.bond(nb.bond).order != BondOrder::kDouble)
          continue;
        if (was_aromatic_bond[nb.bond])
          ring_double = true;
        else
          exo_double = true;
      }
      const Atom &atom = mol.atom(a);
      any_exo = any_exo || exo_double;
      if (ring_double)
        pi += 1;
      else if (!exo_double && (atom.element.has_lone_pair() || atom.formal_charge < 0))
        pi += 2;
    }
    if (!any_exo && pi % 4 != 2)
      throw ChemError(ChemErrorKind::kKekulizationFailure,
                      "aromatic ring with " + std::to_string(pi)
                          + " pi electrons is not 4n+2");
  }
}

// A bond is resonant when it lies on a cycle alternating between double and
// single bonds, i.e. its order differs between Kekulé structures. Only atoms
// with exactly one double bond and no triple bond take part.
std::vector<bool> find_resonant_bonds(const Molecule &mol) {
  const int n = mol.num_atoms();
  std::vector<int> mate(n, -1);
  std::vector<int> doubles(n, 0);
  std::vector<bool> has_triple(n, false);
  for (const Bond &b: mol.bonds()) {
    if (b.order == BondOrder::kDouble) {
      ++doubles[b.begin];
      ++doubles[b.end];
    } else if (b.order == BondOrder::kTriple) {
      has_triple[b.begin] = has_triple[b.end] = true;
    }
  }
  auto eligible = [&](int a) { return doubles[a] == 1 && !has_triple[a]; };
  for (const Bond &b: mol.bonds()) {
    if (b.order == BondOrder::kDouble && eligible(b.begin) && eligible(b.end)
        && mol.is_ring_bond(&b - mol.bonds().data())) {
      mate[b.begin] = b.end;
      mate[b.end] = b.begin;
    }
  }

  std::vector<bool> resonant(mol.num_bonds(), false);
  std::vector<int> seen(n, -1);
  std::vector<int> queue;

  // Arc x -> mate(y) for each single ring bond (x, y) between matched atoms.
  // A single bond (u, v) is on an alternating cycle iff u is reachable from
  // mate(v).
  for (int bi = 0; bi < mol.num_bonds(); ++bi) {
    const Bond &b = mol.bond(bi);
    if (b.order != BondOrder::kSingle || !mol.is_ring_bond(bi))
      continue;
    const int u = b.begin;
    const int v = b.end;
    if (mate[u] < 0 || mate[v] < 0)
      continue;

    queue.assign(1, mate[v]);
    seen[mate[v]] = bi;
    bool found = mate[v] == u;
    for (std::size_t qi = 0; qi < queue.size() && !found; ++qi) {
      const int x = queue[qi];
      for (const Neighbor &nb: mol.neighbors(x)) {
        const Bond &e = mol.bond(nb.bond);
        if (e.order != BondOrder::kSingle || mate[nb.atom] < 0
            || !mol.is_ring_bond(nb.bond))
          continue;
        const int next = mate[nb.atom];
        if (next == u) {
          found = true;
          break;
        }
        if (seen[next] != bi) {
          seen[next] = bi;
          queue.push_back(next);
        }
      }
    }
    if (found)
      resonant[bi] = true;
  }

  for (int bi = 0; bi < mol.num_bonds(); ++bi) {
    const Bond &b = mol.bond(bi);
    if (b.order != BondOrder::kDouble || mate[b.begin] != b.end)
      continue;
    for (const Neighbor &nb: mol.neighbors(b.begin)) {
      if (resonant[nb.bond]) {
        resonant[bi] = true;
        break;
      }
    }
  }
  return resonant;
}

} // namespace

Molecule perceive(const Molecule &input) {
  Molecule mol = input;
  MoleculeEditor edit(mol);
  const int n = mol.num_atoms();

  std::vector<bool> ring = find_ring_bonds(mol);
  edit.set_ring_bonds(ring);

  // Aromatic bonds outside rings (e.g. the biaryl link in c1ccccc1c1ccccc1)
  // are plain single bonds.
  std::vector<bool> was_aromatic(mol.num_bonds(), false);
  for (int b = 0; b < mol.num_bonds(); ++b) {
    if (mol.bond(b).order != BondOrder::kAromatic)
      continue;
    if (ring[b])
      was_aromatic[b] = true;
    else
      edit.set_order(b, BondOrder::kSingle);
  }

  std::vector<bool> need(n, false);
  bool any_aromatic = false;
  for (int a = 0; a < n; ++a) {
    const Atom &atom = mol.atom(a);
    if (!atom.aromatic)
      continue;
    any_aromatic = true;
    const bool in_aromatic_ring =
        std::any_of(mol.neighbors(a).begin(), mol.neighbors(a).end(),
                    [&](const Neighbor &nb) { return was_aromatic[nb.bond]; });
    if (!in_aromatic_ring)
      throw ChemError(ChemErrorKind::kKekulizationFailure,
                      "non-ring " + atom_desc(mol, a) + " marked aromatic");
    const int used = mol.bond_order_sum(a) + atom.explicit_h.value_or(0);
    const int v = smallest_valence_at_least(atom, used);
    if (v < 0)
      throw ChemError(ChemErrorKind::kValenceViolation,
                      atom_desc(mol, a) + " exceeds every allowed valence");
    need[a] = v - used >= 1;
  }

  if (any_aromatic) {
    KekuleMatcher matcher(mol, need);
    if (!matcher.solve())
      throw ChemError(ChemErrorKind::kKekulizationFailure,
                      "no alternating bond assignment for the aromatic system");
    for (int b = 0; b < mol.num_bonds(); ++b) {
      const Bond &bond = mol.bond(b);
      if (bond.order != BondOrder::kAromatic)
        continue;
      edit.set_order(b, matcher.mate(bond.begin) == bond.end ? BondOrder::kDouble
                                                            : BondOrder::kSingle);
    }
    check_isolated_aromatic_rings(mol, was_aromatic);
  }

  std::vector<int> implicit(n, 0);
  for (int a = 0; a < n; ++a) {
    const Atom &atom = mol.atom(a);
    const int sum = mol.bond_order_sum(a);
    if (atom.is_bracket()) {
      if (!has_valence_model(atom))
        continue;
      if (smallest_valence_at_least(atom, sum + *atom.explicit_h) < 0)
        throw ChemError(ChemErrorKind::kValenceViolation,
                        atom_desc(mol, a) + " exceeds every allowed valence");
      continue;
    }
    const int v = smallest_valence_at_least(atom, sum);
    if (v < 0)
      throw ChemError(ChemErrorKind::kValenceViolation,
                      atom_desc(mol, a) + " exceeds every allowed valence");
    implicit[a] = v - sum;
  }
  edit.set_implicit_h(std::move(implicit));
  edit.set_resonant(find_resonant_bonds(mol));
  edit.mark_perceived();
  return mol;
}

} // namespace msbench::chem
