//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_CHEM_CANONICAL_H_
#define MSBENCH_CHEM_CANONICAL_H_

#include <string>
#include <vector>

#include "msbench/chem/molecule.h"

namespace msbench::chem {

/// Unique SMILES for the molecule's labeled graph. Components are
/// canonicalized separately and joined in lexicographic order. Stereo is
/// never written. Requires a perceived molecule.
std::string canonical_smiles(const Molecule &mol);

/// Canonical atom ranks (a permutation of 0..n-1) of a connected molecule.
std::vector<int> canonical_ranks(const Molecule &mol);

/// Graph isomorphism on (element, charge, isotope, total H) atom labels and
/// bond labels. Independent of canonical_smiles.
bool molecules_equal(const Molecule &a, const Molecule &b);

} // namespace msbench::chem

#endif // MSBENCH_CHEM_CANONICAL_H_
