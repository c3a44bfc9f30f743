//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Prints the 2048-bit fingerprint of every corpus SMILES as hex words, one
// molecule per line. Used to compare output across processes.

#include <cstdio>
#include <fstream>
#include <string>

#include "msbench/similarity/fingerprint.h"

int main(int argc, char **argv) {
  if (argc != 2)
    return 2;
  std::ifstream in(argv[1]);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const std::string smiles = line.substr(0, line.find('\t'));
    const auto mol = msbench::chem::try_molecule_from_smiles(smiles);
    if (!mol)
      continue;
    const auto fp = msbench::similarity::morgan_fingerprint(*mol);
    for (const auto w: fp.words())
      std::printf("%016llx", static_cast<unsigned long long>(w));
    std::printf("\n");
  }
  return 0;
}
