//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/chem/molecule.h"

#include <algorithm>

#include "chem/editor.h"

namespace msbench::chem {

std::string_view to_string(ChemErrorKind kind) {
  switch (kind) {
  case ChemErrorKind::kEmptyInput:
    return "EmptyInput";
  case ChemErrorKind::kUnclosedRing:
    return "UnclosedRing";
  case ChemErrorKind::kUnbalancedParen:
    return "UnbalancedParen";
  case ChemErrorKind::kUnknownElement:
    return "UnknownElement";
  case ChemErrorKind::kBadBracketAtom:
    return "BadBracketAtom";
  case ChemErrorKind::kSyntaxError:
    return "SyntaxError";
  case ChemErrorKind::kKekulizationFailure:
    return "KekulizationFailure";
  case ChemErrorKind::kValenceViolation:
    return "ValenceViolation";
  case ChemErrorKind::kBadFormulaSyntax:
    return "BadFormulaSyntax";
  }
  return "Unknown";
}

ChemError::ChemError(ChemErrorKind kind, const std::string &detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind) { }

int Molecule::add_atom(const Atom &atom) {
  atoms_.push_back(atom);
  adj_.emplace_back();
  perceived_ = false;
  return num_atoms() - 1;
}

int Molecule::add_bond(int begin, int end, BondOrder order) {
  if (begin == end)
    throw ChemError(ChemErrorKind::kSyntaxError, "bond from an atom to itself");
  if (find_bond(begin, end) >= 0)
    throw ChemError(ChemErrorKind::kSyntaxError, "duplicate bond");
  const int idx = num_bonds();
  bonds_.push_back({ begin, end, order });
  ring_bond_.push_back(false);
  resonant_.push_back(false);
  adj_[begin].push_back({ end, idx });
  adj_[end].push_back({ begin, idx });
  perceived_ = false;
  return idx;
}

int Molecule::find_bond(int a, int b) const {
  const auto &na = adj_[a].size() <= adj_[b].size() ? adj_[a] : adj_[b];
  const int target = adj_[a].size() <= adj_[b].size() ? b : a;
  for (const Neighbor &n: na) {
    if (n.atom == target)
      return n.bond;
  }
  return -1;
}

int Molecule::total_h(int atom) const {
  return implicit_h(atom) + atoms_[atom].explicit_h.value_or(0);
}

int Molecule::bond_order_sum(int atom) const {
  int sum = 0;
  for (const Neighbor &n: adj_[atom])
    sum += valence_contribution(bonds_[n.bond].order);
  return sum;
}

bool Molecule::is_ring_atom(int atom) const {
  return std::any_of(adj_[atom].begin(), adj_[atom].end(),
                     [&](const Neighbor &n) { return ring_bond_[n.bond]; });
}

BondLabel Molecule::bond_label(int bond) const {
  if (resonant_[bond])
    return BondLabel::kResonant;
  switch (bonds_[bond].order) {
  case BondOrder::kDouble:
    return BondLabel::kDouble;
  case BondOrder::kTriple:
    return BondLabel::kTriple;
  case BondOrder::kAromatic:
    return BondLabel::kResonant;
  default:
    return BondLabel::kSingle;
  }
}

std::vector<int> Molecule::component_ids(int *num_components) const {
  std::vector<int> comp(atoms_.size(), -1);
  std::vector<int> stack;
  int n = 0;
  for (int start = 0; start < num_atoms(); ++start) {
    if (comp[start] >= 0)
      continue;
    comp[start] = n;
    stack.push_back(start);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const Neighbor &nb: adj_[u]) {
        if (comp[nb.atom] < 0) {
          comp[nb.atom] = n;
          stack.push_back(nb.atom);
        }
      }
    }
    ++n;
  }
  if (num_components != nullptr)
    *num_components = n;
  return comp;
}

Molecule Molecule::subgraph(std::span<const int> atom_ids) const {
  Molecule sub;
  std::vector<int> remap(atoms_.size(), -1);
  for (const int a: atom_ids)
    remap[a] = sub.add_atom(atoms_[a]);

  std::vector<int> bond_src;
  for (int b = 0; b < num_bonds(); ++b) {
    const Bond &bond = bonds_[b];
    if (remap[bond.begin] >= 0 && remap[bond.end] >= 0) {
      sub.add_bond(remap[bond.begin], remap[bond.end], bond.order);
      bond_src.push_back(b);
    }
  }

  if (perceived_) {
    sub.implicit_h_.reserve(atom_ids.size());
    for (const int a: atom_ids)
      sub.implicit_h_.push_back(implicit_h_[a]);
    for (std::size_t i = 0; i < bond_src.size(); ++i) {
      sub.ring_bond_[i] = ring_bond_[bond_src[i]];
      sub.resonant_[i] = resonant_[bond_src[i]];
    }
    sub.perceived_ = true;
  }
  return sub;
}

Molecule molecule_from_smiles(std::string_view text) {
  return perceive(parse_smiles(text));
}

std::optional<Molecule> try_molecule_from_smiles(std::string_view text) {
  try {
    return molecule_from_smiles(text);
  } catch (const ChemError &) {
    return std::nullopt;
  }
}

} // namespace msbench::chem
