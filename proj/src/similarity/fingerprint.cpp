//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/similarity/fingerprint.h"

#include <algorithm>
#include <bit>
#include <utility>

namespace msbench::similarity {
namespace {

// Fixed-width mixing so bit positions are identical on every platform.
std::uint32_t mix(std::uint32_t seed, std::uint32_t value) {
  seed ^= value + 0x9e3779b9u + (seed << 6) + (seed >> 2);
  return seed;
}

std::uint32_t atom_invariant(const chem::Molecule &mol, int a) {
  const chem::Atom &atom = mol.atom(a);
  std::uint32_t h = 0;
  h = mix(h, static_cast<std::uint32_t>(atom.element.atomic_number()));
  h = mix(h, static_cast<std::uint32_t>(atom.formal_charge + 128));
  h = mix(h, static_cast<std::uint32_t>(mol.degree(a)));
  h = mix(h, static_cast<std::uint32_t>(mol.total_h(a)));
  h = mix(h, mol.is_ring_atom(a) ? 1u : 0u);
  return h;
}

} // namespace

Fingerprint::Fingerprint(int nbits, int radius)
    : nbits_(nbits), radius_(radius), words_((nbits + 63) / 64, 0) { }

int Fingerprint::popcount() const {
  int n = 0;
  for (const auto w: words_)
    n += std::popcount(w);
  return n;
}

Fingerprint morgan_fingerprint(const chem::Molecule &mol, int radius, int nbits) {
  if (radius < 0)
    throw std::invalid_argument("fingerprint radius must be >= 0");
  if (nbits < 64 || !std::has_single_bit(static_cast<unsigned>(nbits)))
    throw std::invalid_argument("fingerprint size must be a power of two >= 64");
  if (!mol.perceived())
    throw std::invalid_argument("fingerprint requires a perceived molecule");

  Fingerprint fp(nbits, radius);
  const int n = mol.num_atoms();
  std::vector<std::uint32_t> cur(n), next(n);
  for (int a = 0; a < n; ++a) {
    cur[a] = atom_invariant(mol, a);
    fp.set(static_cast<int>(cur[a] & static_cast<std::uint32_t>(nbits - 1)));
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> env;
  for (int r = 1; r <= radius; ++r) {
    for (int a = 0; a < n; ++a) {
      env.clear();
      for (const chem::Neighbor &nb: mol.neighbors(a))
        env.emplace_back(static_cast<std::uint32_t>(mol.bond_label(nb.bond)), cur[nb.atom]);
      std::sort(env.begin(), env.end());
      std::uint32_t h = mix(static_cast<std::uint32_t>(r), cur[a]);
      for (const auto &[label, nh]: env) {
        h = mix(h, label);
        h = mix(h, nh);
      }
      next[a] = h;
      fp.set(static_cast<int>(h & static_cast<std::uint32_t>(nbits - 1)));
    }
    std::swap(cur, next);
  }
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.nbits() != b.nbits() || a.radius() != b.radius())
    throw IncomparableFingerprints("fingerprints differ in size or radius");
  int both = 0;
  int either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += std::popcount(a.words()[i] & b.words()[i]);
    either += std::popcount(a.words()[i] | b.words()[i]);
  }
  if (either == 0)
    return 1.0;
  return static_cast<double>(both) / either;
}

} // namespace msbench::similarity
