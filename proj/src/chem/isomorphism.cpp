//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "msbench/chem/canonical.h"

namespace msbench::chem {
namespace {

using Label = std::tuple<int, int, int, int, int>;

Label atom_label(const Molecule &m, int a) {
  const Atom &atom = m.atom(a);
  return { atom.element.atomic_number(), atom.formal_charge,
           atom.isotope.value_or(0), m.total_h(a), m.degree(a) };
}

// Colors both graphs in one shared palette so equal colors are comparable
// across the pair. Returns false if the color histograms diverge.
bool joint_colors(const Molecule &a, const Molecule &b, std::vector<int> &ca,
                  std::vector<int> &cb) {
  std::map<Label, int> palette;
  for (int i = 0; i < a.num_atoms(); ++i)
    palette.emplace(atom_label(a, i), 0);
  for (int i = 0; i < b.num_atoms(); ++i)
    palette.emplace(atom_label(b, i), 0);
  int next = 0;
  for (auto &[label, id]: palette)
    id = next++;
  ca.resize(a.num_atoms());
  cb.resize(b.num_atoms());
  for (int i = 0; i < a.num_atoms(); ++i)
    ca[i] = palette[atom_label(a, i)];
  for (int i = 0; i < b.num_atoms(); ++i)
    cb[i] = palette[atom_label(b, i)];

  using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
  auto sig = [](const Molecule &m, const std::vector<int> &c, int i) {
    Sig s { c[i], {} };
    for (const Neighbor &nb: m.neighbors(i))
      s.second.emplace_back(c[nb.atom], static_cast<int>(m.bond_label(nb.bond)));
    std::sort(s.second.begin(), s.second.end());
    return s;
  };

  int colors = next;
  for (int round = 0; round < a.num_atoms(); ++round) {
    std::map<Sig, int> refined;
    std::vector<Sig> sa(a.num_atoms()), sb(b.num_atoms());
    for (int i = 0; i < a.num_atoms(); ++i)
      refined.emplace(sa[i] = sig(a, ca, i), 0);
    for (int i = 0; i < b.num_atoms(); ++i)
      refined.emplace(sb[i] = sig(b, cb, i), 0);
    int id = 0;
    for (auto &[s, v]: refined)
      v = id++;
    for (int i = 0; i < a.num_atoms(); ++i)
      ca[i] = refined[sa[i]];
    for (int i = 0; i < b.num_atoms(); ++i)
      cb[i] = refined[sb[i]];
    std::vector<int> ha(ca), hb(cb);
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb)
      return false;
    if (id == colors)
      break;
    colors = id;
  }
  return true;
}

class Matcher {
public:
  Matcher(const Molecule &a, const Molecule &b, std::vector<int> ca,
          std::vector<int> cb)
      : a_(a), b_(b), ca_(std::move(ca)), cb_(std::move(cb)),
        map_(a.num_atoms(), -1), used_(b.num_atoms(), false) {
    // Visit atoms in BFS order so each new atom has mapped neighbors.
    std::vector<bool> seen(a.num_atoms(), false);
    for (int s = 0; s < a.num_atoms(); ++s) {
      if (seen[s])
        continue;
      seen[s] = true;
      std::size_t head = order_.size();
      order_.push_back(s);
      while (head < order_.size()) {
        const int u = order_[head++];
        for (const Neighbor &nb: a.neighbors(u)) {
          if (!seen[nb.atom]) {
            seen[nb.atom] = true;
            order_.push_back(nb.atom);
          }
        }
      }
    }
  }

  bool run() { return extend(0); }

private:
  bool feasible(int u, int v) const {
    if (ca_[u] != cb_[v] || used_[v])
      return false;
    for (const Neighbor &nb: a_.neighbors(u)) {
      const int w = map_[nb.atom];
      if (w < 0)
        continue;
      const int bond = b_.find_bond(v, w);
      if (bond < 0 || b_.bond_label(bond) != a_.bond_label(nb.bond))
        return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size())
      return true;
    const int u = order_[depth];
    // Prefer candidates adjacent to the image of an already mapped neighbor.
    int anchor = -1;
    for (const Neighbor &nb: a_.neighbors(u)) {
      if (map_[nb.atom] >= 0) {
        anchor = map_[nb.atom];
        break;
      }
    }
    auto attempt = [&](int v) {
      if (!feasible(u, v))
        return false;
      map_[u] = v;
      used_[v] = true;
      if (extend(depth + 1))
        return true;
      map_[u] = -1;
      used_[v] = false;
      return false;
    };
    if (anchor >= 0) {
      for (const Neighbor &nb: b_.neighbors(anchor)) {
        if (attempt(nb.atom))
          return true;
      }
      return false;
    }
    for (int v = 0; v < b_.num_atoms(); ++v) {
      if (attempt(v))
        return true;
    }
    return false;
  }

  const Molecule &a_;
  const Molecule &b_;
  std::vector<int> ca_;
  std::vector<int> cb_;
  std::vector<int> map_;
  std::vector<bool> used_;
  std::vector<int> order_;
};

} // namespace

bool molecules_equal(const Molecule &a, const Molecule &b) {
  if (!a.perceived() || !b.perceived())
    throw std::invalid_argument("molecules_equal requires perceived molecules");
  if (a.num_atoms() != b.num_atoms() || a.num_bonds() != b.num_bonds())
    return false;
  std::vector<int> ca, cb;
  if (!joint_colors(a, b, ca, cb))
    return false;
  return Matcher(a, b, std::move(ca), std::move(cb)).run();
}

} // namespace msbench::chem
