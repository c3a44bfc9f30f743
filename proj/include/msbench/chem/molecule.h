//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_CHEM_MOLECULE_H_
#define MSBENCH_CHEM_MOLECULE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msbench/chem/element.h"

namespace msbench::chem {

enum class ChemErrorKind {
  kEmptyInput,
  kUnclosedRing,
  kUnbalancedParen,
  kUnknownElement,
  kBadBracketAtom,
  kSyntaxError,
  kKekulizationFailure,
  kValenceViolation,
  kBadFormulaSyntax,
};

std::string_view to_string(ChemErrorKind kind);

/// Raised by every chem-core operation that can reject its input.
class ChemError: public std::runtime_error {
public:
  ChemError(ChemErrorKind kind, const std::string &detail);

  ChemErrorKind kind() const { return kind_; }

private:
  ChemErrorKind kind_;
};

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

/// Integral contribution of a bond to its endpoints' valence. Aromatic bonds
/// count as 1 here; they never survive perception.
constexpr int valence_contribution(BondOrder order) {
  return order == BondOrder::kAromatic ? 1 : static_cast<int>(order);
}

struct Atom {
  Element element;
  std::optional<int> isotope;
  int formal_charge = 0;
  // Set only for bracket atoms; such atoms never receive implicit hydrogens.
  std::optional<int> explicit_h;
  bool aromatic = false;

  bool is_bracket() const { return explicit_h.has_value(); }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const { return atom == begin ? end : begin; }
};

/// Order-independent bond label used by equality, canonicalization,
/// fingerprints and MCES: Kekulé order, or kResonant for bonds whose order
/// differs between the molecule's Kekulé structures.
enum class BondLabel : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kResonant = 4,
};

struct Neighbor {
  int atom;
  int bond;
};

/// Labeled molecular graph. Built by the SMILES parser, then completed by
/// perceive(), after which the value is immutable and freely shareable.
class Molecule {
public:
  Molecule() = default;

  int add_atom(const Atom &atom);
  /// Returns the new bond index. Throws kSyntaxError on self-loops and
  /// duplicate bonds.
  int add_bond(int begin, int end, BondOrder order);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }

  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  std::span<const Neighbor> neighbors(int atom) const { return adj_[atom]; }
  int degree(int atom) const { return static_cast<int>(adj_[atom].size()); }

  /// Bond index between two atoms, or -1.
  int find_bond(int a, int b) const;

  bool perceived() const { return perceived_; }
  int implicit_h(int atom) const { return implicit_h_.empty() ? 0 : implicit_h_[atom]; }
  int total_h(int atom) const;

  /// Sum of bond valence contributions of an atom.
  int bond_order_sum(int atom) const;

  bool is_ring_bond(int bond) const { return ring_bond_[bond]; }
  bool is_ring_atom(int atom) const;
  BondLabel bond_label(int bond) const;

  /// Connected-component id per atom, numbered in order of first atom.
  std::vector<int> component_ids(int *num_components = nullptr) const;

  /// Copies the atoms in `atom_ids` (and all bonds among them) into a new
  /// molecule, preserving perception state. `atom_ids` defines the new order.
  Molecule subgraph(std::span<const int> atom_ids) const;

private:
  friend class MoleculeEditor;

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<int> implicit_h_;
  std::vector<bool> ring_bond_;
  std::vector<bool> resonant_;
  bool perceived_ = false;
};

/// Parses SMILES text into an unperceived molecular graph. Stereo tokens
/// (/ \ @ @@ and atom classes) are accepted and dropped.
Molecule parse_smiles(std::string_view text);

/// Kekulizes aromatic input, assigns implicit hydrogens, ring membership and
/// resonance labels. Throws kKekulizationFailure or kValenceViolation.
Molecule perceive(const Molecule &mol);

/// parse_smiles followed by perceive.
Molecule molecule_from_smiles(std::string_view text);

/// Like molecule_from_smiles but returns nullopt on any ChemError.
std::optional<Molecule> try_molecule_from_smiles(std::string_view text);

/// Writes a non-canonical SMILES that visits atoms in the order given by
/// `ranks` (lower rank first). Emits Kekulé bonds and no stereo. When
/// `atom_order` is given it receives the atom indices in output order.
std::string write_smiles(const Molecule &mol, std::span<const int> ranks,
                         std::vector<int> *atom_order = nullptr);

} // namespace msbench::chem

#endif // MSBENCH_CHEM_MOLECULE_H_
