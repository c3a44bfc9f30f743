//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_SRC_CHEM_EDITOR_H_
#define MSBENCH_SRC_CHEM_EDITOR_H_

#include <vector>

#include "msbench/chem/molecule.h"

namespace msbench::chem {

// Write access to perception state; used only inside chem-core.
class MoleculeEditor {
public:
  explicit MoleculeEditor(Molecule &mol): mol_(mol) { }

  void set_order(int bond, BondOrder order) { mol_.bonds_[bond].order = order; }
  void set_implicit_h(std::vector<int> h) { mol_.implicit_h_ = std::move(h); }
  void set_ring_bonds(std::vector<bool> ring) { mol_.ring_bond_ = std::move(ring); }
  void set_resonant(std::vector<bool> res) { mol_.resonant_ = std::move(res); }
  void mark_perceived() { mol_.perceived_ = true; }

private:
  Molecule &mol_;
};

} // namespace msbench::chem

#endif // MSBENCH_SRC_CHEM_EDITOR_H_
