//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_SIMILARITY_MCES_H_
#define MSBENCH_SIMILARITY_MCES_H_

#include <chrono>

#include "msbench/chem/molecule.h"

namespace msbench::similarity {

using Budget = std::chrono::duration<double>;

inline constexpr Budget kDefaultMcesBudget { 1.0 };

struct McesResult {
  /// Size of the largest common edge subgraph found. A lower bound when the
  /// search was truncated.
  int common_edges = 0;
  /// 1 - common_edges / max(|E(a)|, |E(b)|); an upper bound when truncated.
  double dissimilarity = 1.0;
  /// False when the time budget stopped the search early.
  bool optimal = true;
};

/// Maximum common edge subgraph of the heavy-atom graphs. Two edges match
/// when they have the same bond label and the same endpoint elements, and all
/// matched edges must extend to one injective atom mapping. The subgraph may
/// be disconnected.
McesResult mces(const chem::Molecule &a, const chem::Molecule &b,
                Budget budget = kDefaultMcesBudget);

double mces_dissimilarity(const chem::Molecule &a, const chem::Molecule &b,
                          Budget budget = kDefaultMcesBudget);

/// Cheap upper bound on common_edges: sum over edge labels of the smaller
/// label count.
int mces_upper_bound(const chem::Molecule &a, const chem::Molecule &b);

/// The dissimilarity for a given common edge count, including the
/// edge-free rule (0 for two single atoms of one element, else 1).
double mces_dissimilarity_for(const chem::Molecule &a, const chem::Molecule &b,
                              int common_edges);

} // namespace msbench::similarity

#endif // MSBENCH_SIMILARITY_MCES_H_
