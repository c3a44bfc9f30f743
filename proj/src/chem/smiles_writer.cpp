//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <stdexcept>
#include <unordered_map>
#include <string>
#include <vector>

#include "msbench/chem/molecule.h"

namespace msbench::chem {
namespace {

// Chooses which resonant bonds are written as double: the perfect matching
// of the resonant subgraph that is lexicographically first by atom rank.
class RankedKekulizer {
public:
  RankedKekulizer(const Molecule &mol, std::span<const int> ranks)
      : mol_(mol), ranks_(ranks), mate_(mol.num_atoms(), -1),
        in_r_(mol.num_atoms(), false) {
    for (int b = 0; b < mol.num_bonds(); ++b) {
      if (mol.bond_label(b) == BondLabel::kResonant) {
        in_r_[mol.bond(b).begin] = in_r_[mol.bond(b).end] = true;
      }
    }
    for (int a = 0; a < mol.num_atoms(); ++a) {
      if (in_r_[a])
        order_.push_back(a);
    }
    std::sort(order_.begin(), order_.end(),
              [&](int x, int y) { return ranks_[x] < ranks_[y]; });
  }

  std::vector<BondOrder> orders() {
    if (!order_.empty() && !search(0)) {
      // The molecule's own Kekulé structure is always a valid fallback.
      std::fill(mate_.begin(), mate_.end(), -1);
      for (const Bond &b: mol_.bonds()) {
        if (b.order == BondOrder::kDouble && in_r_[b.begin] && in_r_[b.end]) {
          mate_[b.begin] = b.end;
          mate_[b.end] = b.begin;
        }
      }
    }
    std::vector<BondOrder> out(mol_.num_bonds());
    for (int b = 0; b < mol_.num_bonds(); ++b) {
      const Bond &bond = mol_.bond(b);
      if (mol_.bond_label(b) == BondLabel::kResonant) {
        out[b] = mate_[bond.begin] == bond.end ? BondOrder::kDouble
                                               : BondOrder::kSingle;
      } else {
        out[b] = bond.order;
      }
    }
    return out;
  }

private:
  bool search(std::size_t pos) {
    while (pos < order_.size() && mate_[order_[pos]] >= 0)
      ++pos;
    if (pos == order_.size())
      return true;
    if (++steps_ > 1'000'000)
      return false;
    const int a = order_[pos];
    std::vector<int> partners;
    for (const Neighbor &nb: mol_.neighbors(a)) {
      if (mol_.bond_label(nb.bond) == BondLabel::kResonant && mate_[nb.atom] < 0)
        partners.push_back(nb.atom);
    }
    std::sort(partners.begin(), partners.end(),
              [&](int x, int y) { return ranks_[x] < ranks_[y]; });
    for (const int p: partners) {
      mate_[a] = p;
      mate_[p] = a;
      if (search(pos + 1))
        return true;
      mate_[a] = mate_[p] = -1;
    }
    return false;
  }

  const Molecule &mol_;
  std::span<const int> ranks_;
  std::vector<int> mate_;
  std::vector<bool> in_r_;
  std::vector<int> order_;
  long steps_ = 0;
};

int default_implicit_h(const Atom &atom, int order_sum) {
  std::array<int, 4> buf {};
  const int n = allowed_valences(atom.element, 0, buf);
  for (int i = 0; i < n; ++i) {
    if (buf[i] >= order_sum)
      return buf[i] - order_sum;
  }
  return -1;
}

class Writer {
public:
  Writer(const Molecule &mol, std::span<const int> ranks)
      : mol_(mol), ranks_(ranks), orders_(RankedKekulizer(mol, ranks).orders()),
        visited_(mol.num_atoms(), false), bond_used_(mol.num_bonds(), false),
        children_(mol.num_atoms()), opens_(mol.num_atoms()),
        closes_(mol.num_atoms()) { }

  std::string write() {
    std::vector<int> starts(mol_.num_atoms());
    for (int i = 0; i < mol_.num_atoms(); ++i)
      starts[i] = i;
    std::sort(starts.begin(), starts.end(),
              [&](int x, int y) { return ranks_[x] < ranks_[y]; });

    std::string out;
    for (const int s: starts) {
      if (visited_[s])
        continue;
      plan(s, -1);
      if (!out.empty())
        out += '.';
      emit(s, out);
    }
    return out;
  }

  std::vector<int> take_order() { return std::move(order_); }

private:
  struct Closure {
    int partner;
    int bond;
  };

  void plan(int root, int root_bond) {
    struct Frame {
      int atom;
      std::vector<Neighbor> nbrs;
      std::size_t next;
    };
    std::vector<Frame> stack;
    auto push = [&](int atom, int via_bond) {
      visited_[atom] = true;
      if (via_bond >= 0)
        bond_used_[via_bond] = true;
      auto span = mol_.neighbors(atom);
      std::vector<Neighbor> nbrs(span.begin(), span.end());
      std::sort(nbrs.begin(), nbrs.end(), [&](const Neighbor &x, const Neighbor &y) {
        return ranks_[x.atom] < ranks_[y.atom];
      });
      stack.push_back({ atom, std::move(nbrs), 0 });
    };
    push(root, root_bond);
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next == f.nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = f.nbrs[f.next++];
      if (bond_used_[nb.bond])
        continue;
      if (!visited_[nb.atom]) {
        children_[f.atom].push_back({ nb.atom, nb.bond });
        push(nb.atom, nb.bond);
      } else {
        bond_used_[nb.bond] = true;
        opens_[nb.atom].push_back({ f.atom, nb.bond });
        closes_[f.atom].push_back({ nb.atom, nb.bond });
      }
    }
  }

  void emit(int atom, std::string &out) {
    write_atom(atom, out);
    order_.push_back(atom);

    std::vector<Closure> closes = closes_[atom];
    std::sort(closes.begin(), closes.end(), [&](const Closure &x, const Closure &y) {
      return ranks_[x.partner] < ranks_[y.partner];
    });
    std::vector<int> freed;
    for (const Closure &c: closes) {
      const int digit = ring_digit_[c.bond];
      append_digit(digit, out);
      freed.push_back(digit);
    }

    std::vector<Closure> opens = opens_[atom];
    std::sort(opens.begin(), opens.end(), [&](const Closure &x, const Closure &y) {
      return ranks_[x.partner] < ranks_[y.partner];
    });
    for (const Closure &c: opens) {
      int digit = 1;
      while (digit_busy(digit))
        ++digit;
      busy_.push_back(digit);
      ring_digit_[c.bond] = digit;
      out += bond_symbol(c.bond);
      append_digit(digit, out);
    }
    for (const int d: freed)
      busy_.erase(std::find(busy_.begin(), busy_.end(), d));

    const auto &kids = children_[atom];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool branch = i + 1 < kids.size();
      if (branch)
        out += '(';
      out += bond_symbol(kids[i].bond);
      emit(kids[i].partner, out);
      if (branch)
        out += ')';
    }
  }

  bool digit_busy(int d) const {
    return std::find(busy_.begin(), busy_.end(), d) != busy_.end();
  }

  static void append_digit(int digit, std::string &out) {
    if (digit < 10) {
      out += static_cast<char>('0' + digit);
    } else {
      out += '%';
      out += static_cast<char>('0' + digit / 10);
      out += static_cast<char>('0' + digit % 10);
    }
  }

  std::string_view bond_symbol(int bond) const {
    switch (orders_[bond]) {
    case BondOrder::kDouble:
      return "=";
    case BondOrder::kTriple:
      return "#";
    default:
      return "";
    }
  }

  void write_atom(int idx, std::string &out) const {
    const Atom &atom = mol_.atom(idx);
    int sum = 0;
    for (const Neighbor &nb: mol_.neighbors(idx))
      sum += valence_contribution(orders_[nb.bond]);
    const int h = mol_.total_h(idx);

    const bool bare = atom.element.is_organic_subset() && atom.formal_charge == 0
                      && !atom.isotope && default_implicit_h(atom, sum) == h;
    if (bare) {
      out += atom.element.symbol();
      return;
    }
    out += '[';
    if (atom.isotope)
      out += std::to_string(*atom.isotope);
    out += atom.element.symbol();
    if (h > 0) {
      out += 'H';
      if (h > 1)
        out += std::to_string(h);
    }
    if (atom.formal_charge != 0) {
      out += atom.formal_charge > 0 ? '+' : '-';
      const int mag = atom.formal_charge > 0 ? atom.formal_charge : -atom.formal_charge;
      if (mag > 1)
        out += std::to_string(mag);
    }
    out += ']';
  }

  const Molecule &mol_;
  std::span<const int> ranks_;
  std::vector<BondOrder> orders_;
  std::vector<bool> visited_;
  std::vector<bool> bond_used_;
  std::vector<std::vector<Closure>> children_;
  std::vector<std::vector<Closure>> opens_;
  std::vector<std::vector<Closure>> closes_;
  std::vector<int> busy_;
  std::unordered_map<int, int> ring_digit_;
  std::vector<int> order_;
};

} // namespace

std::string write_smiles(const Molecule &mol, std::span<const int> ranks,
                         std::vector<int> *atom_order) {
  if (!mol.perceived())
    throw std::invalid_argument("write_smiles requires a perceived molecule");
  if (static_cast<int>(ranks.size()) != mol.num_atoms())
    throw std::invalid_argument("write_smiles: one rank per atom required");
  Writer writer(mol, ranks);
  std::string out = writer.write();
  if (atom_order != nullptr)
    *atom_order = writer.take_order();
  return out;
}

} // namespace msbench::chem
