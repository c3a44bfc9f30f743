//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "msbench/chem/molecule.h"

namespace msbench::chem {
namespace {

using Edge = std::pair<int, int>;

std::set<Edge> edges_of(const Molecule &m) {
  std::set<Edge> out;
  for (const Bond &b: m.bonds())
    out.emplace(std::min(b.begin, b.end), std::max(b.begin, b.end));
  return out;
}

ChemErrorKind parse_error(std::string_view s) {
  try {
    parse_smiles(s);
  } catch (const ChemError &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << s;
  return ChemErrorKind::kSyntaxError;
}

TEST(SmilesParse, TertButylamine) {
  const Molecule m = parse_smiles("CC(C)(C)N");
  EXPECT_EQ(m.num_atoms(), 5);
  EXPECT_EQ(m.num_bonds(), 4);
  for (const Bond &b: m.bonds())
    EXPECT_EQ(b.order, BondOrder::kSingle);
  // Central carbon carries the branches and the amine.
  EXPECT_EQ(m.degree(1), 4);
  EXPECT_EQ(edges_of(m), (std::set<Edge> { { 0, 1 }, { 1, 2 }, { 1, 3 }, { 1, 4 } }));
}

TEST(SmilesParse, EthanolAdjacency) {
  const Molecule m = parse_smiles("CCO");
  ASSERT_EQ(m.num_atoms(), 3);
  EXPECT_EQ(m.atom(0).element, elements::kC);
  EXPECT_EQ(m.atom(1).element, elements::kC);
  EXPECT_EQ(m.atom(2).element, elements::kO);
  EXPECT_EQ(edges_of(m), (std::set<Edge> { { 0, 1 }, { 1, 2 } }));
}

TEST(SmilesParse, TyrosineAromaticRing) {
  const Molecule m = parse_smiles("NC(Cc1ccc(O)cc1)C(=O)O");
  EXPECT_EQ(m.num_atoms(), 13);
  int aromatic_atoms = 0;
  for (const Atom &a: m.atoms())
    aromatic_atoms += a.aromatic ? 1 : 0;
  EXPECT_EQ(aromatic_atoms, 6);
  int aromatic_bonds = 0;
  for (const Bond &b: m.bonds())
    aromatic_bonds += b.order == BondOrder::kAromatic ? 1 : 0;
  EXPECT_EQ(aromatic_bonds, 6);
}

TEST(SmilesParse, BracketAtoms) {
  const Molecule m = parse_smiles("[13CH3][NH3+].[O-2].[Na+]");
  ASSERT_EQ(m.num_atoms(), 4);
  EXPECT_EQ(m.atom(0).isotope, 13);
  EXPECT_EQ(m.atom(0).explicit_h, 3);
  EXPECT_EQ(m.atom(1).formal_charge, 1);
  EXPECT_EQ(m.atom(1).explicit_h, 3);
  EXPECT_EQ(m.atom(2).formal_charge, -2);
  EXPECT_EQ(m.atom(2).explicit_h, 0);
  EXPECT_EQ(m.atom(3).element.symbol(), "Na");
  int ncomp = 0;
  m.component_ids(&ncomp);
  EXPECT_EQ(ncomp, 3);
}

TEST(SmilesParse, RepeatedChargeSigns) {
  EXPECT_EQ(parse_smiles("[Fe++]").atom(0).formal_charge, 2);
  EXPECT_EQ(parse_smiles("[O--]").atom(0).formal_charge, -2);
}

TEST(SmilesParse, StereoTokensDropped) {
  const Molecule a = parse_smiles("F/C=C/F");
  const Molecule b = parse_smiles("FC=CF");
  EXPECT_EQ(a.num_atoms(), b.num_atoms());
  EXPECT_EQ(a.bond(1).order, BondOrder::kDouble);
  const Molecule c = parse_smiles("N[C@@H](C)C(=O)O");
  EXPECT_EQ(c.num_atoms(), 6);
  EXPECT_EQ(c.atom(1).explicit_h, 1);
  EXPECT_EQ(parse_smiles("[C@TH1H](F)(Cl)Br").num_atoms(), 4);
}

TEST(SmilesParse, RingClosures) {
  const Molecule m = parse_smiles("C%12CC%12");
  EXPECT_EQ(m.num_bonds(), 3);
  const Molecule r = parse_smiles("C1=CC=CC=1");
  EXPECT_EQ(r.num_bonds(), 5);
  EXPECT_EQ(r.bond(r.find_bond(0, 4)).order, BondOrder::kDouble);
  // A ring digit may be reused after closing.
  EXPECT_EQ(parse_smiles("C1CC1C1CC1").num_bonds(), 7);
}

TEST(SmilesParse, Errors) {
  EXPECT_EQ(parse_error("C1CC"), ChemErrorKind::kUnclosedRing);
  EXPECT_EQ(parse_error(""), ChemErrorKind::kEmptyInput);
  EXPECT_EQ(parse_error("   "), ChemErrorKind::kEmptyInput);
  EXPECT_EQ(parse_error("CC(C"), ChemErrorKind::kUnbalancedParen);
  EXPECT_EQ(parse_error("CC)C"), ChemErrorKind::kUnbalancedParen);
  EXPECT_EQ(parse_error("CXC"), ChemErrorKind::kUnknownElement);
  EXPECT_EQ(parse_error("C*C"), ChemErrorKind::kUnknownElement);
  EXPECT_EQ(parse_error("[Xx]"), ChemErrorKind::kUnknownElement);
  EXPECT_EQ(parse_error("[CH"), ChemErrorKind::kBadBracketAtom);
  EXPECT_EQ(parse_error("[]"), ChemErrorKind::kBadBracketAtom);
  EXPECT_EQ(parse_error("[C+20]"), ChemErrorKind::kBadBracketAtom);
  EXPECT_EQ(parse_error("CC="), ChemErrorKind::kSyntaxError);
  EXPECT_EQ(parse_error("C==C"), ChemErrorKind::kSyntaxError);
  EXPECT_EQ(parse_error("C11"), ChemErrorKind::kSyntaxError);
  EXPECT_EQ(parse_error("C1CC=1C1"), ChemErrorKind::kUnclosedRing);
  EXPECT_EQ(parse_error("C()C"), ChemErrorKind::kSyntaxError);
  EXPECT_EQ(parse_error("(C)C"), ChemErrorKind::kSyntaxError);
  EXPECT_EQ(parse_error("C.(C)"), ChemErrorKind::kSyntaxError);
  EXPECT_EQ(parse_error("C12CC2"), ChemErrorKind::kUnclosedRing);
  EXPECT_EQ(parse_error("C12C2"), ChemErrorKind::kSyntaxError);
  EXPECT_EQ(parse_error("C=1CC-1"), ChemErrorKind::kSyntaxError);
}

TEST(SmilesParse, WhitespaceTrimmed) {
  EXPECT_EQ(parse_smiles("  CCO\n").num_atoms(), 3);
}

} // namespace
} // namespace msbench::chem
