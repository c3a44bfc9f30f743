//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_SIMILARITY_FINGERPRINT_H_
#define MSBENCH_SIMILARITY_FINGERPRINT_H_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "msbench/chem/molecule.h"

namespace msbench::similarity {

/// Raised when two fingerprints of different shape are compared.
class IncomparableFingerprints: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class Fingerprint {
public:
  Fingerprint(int nbits, int radius);

  int nbits() const { return nbits_; }
  int radius() const { return radius_; }

  void set(int bit) { words_[bit >> 6] |= std::uint64_t { 1 } << (bit & 63); }
  bool test(int bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1; }
  int popcount() const;
  const std::vector<std::uint64_t> &words() const { return words_; }

  bool operator==(const Fingerprint &) const = default;

private:
  int nbits_;
  int radius_;
  std::vector<std::uint64_t> words_;
};

/// Circular (ECFP-style) fingerprint. Atom invariant: element, charge,
/// degree, total H, ring membership; each iteration hashes the sorted
/// (bond label, neighbor hash) list. Every environment of radius 0..radius
/// sets one bit. nbits must be a power of two >= 64.
Fingerprint morgan_fingerprint(const chem::Molecule &mol, int radius = 2,
                               int nbits = 2048);

/// |a & b| / |a | b|; 1.0 when both are empty.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

} // namespace msbench::similarity

#endif // MSBENCH_SIMILARITY_FINGERPRINT_H_
