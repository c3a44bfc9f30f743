//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_CHEM_FORMULA_H_
#define MSBENCH_CHEM_FORMULA_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "msbench/chem/molecule.h"

namespace msbench::chem {

/// Element symbol -> positive count. Zero entries are never stored.
class ElementCounts {
public:
  using Map = std::map<std::string, int, std::less<>>;

  ElementCounts() = default;

  /// Adds `n` (which may be negative) to an element's count. Throws
  /// std::invalid_argument if the result would be negative.
  void add(std::string_view symbol, int n);
  int count(std::string_view symbol) const;

  bool empty() const { return counts_.empty(); }
  const Map &entries() const { return counts_; }

  ElementCounts &operator+=(const ElementCounts &other);
  friend ElementCounts operator+(ElementCounts a, const ElementCounts &b) {
    a += b;
    return a;
  }
  bool operator==(const ElementCounts &) const = default;

private:
  Map counts_;
};

/// Exact fraction with a positive denominator, always in lowest terms.
class Rational {
public:
  constexpr Rational() = default;
  Rational(long long num, long long den = 1);

  long long num() const { return num_; }
  long long den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / den_; }
  /// "0", "-2", "7/2".
  std::string to_string() const;

  bool operator==(const Rational &) const = default;

private:
  long long num_ = 0;
  long long den_ = 1;
};

/// Counts over all atoms, including implicit and explicit hydrogens.
ElementCounts molecular_formula(const Molecule &mol);

/// Parses "C6H12O6"-style formulas. Repeated symbols are summed.
/// Throws ChemError kBadFormulaSyntax or kUnknownElement.
ElementCounts parse_formula(std::string_view text);

/// Hill order: C, then H, then the rest alphabetically; without carbon,
/// everything alphabetically.
std::string canonical_formula(const ElementCounts &counts);

/// (C + Si) - (H + F + Cl + Br + I)/2 + (N + P)/2 + 1.
Rational dbe(const ElementCounts &counts);

class MassTable {
public:
  static constexpr double kProtonMass = 1.007276466;

  /// The table shipped with the library.
  static const MassTable &builtin();
  /// Parses `element<TAB>mass` lines; '#' starts a comment line.
  static MassTable parse(std::string_view text);
  static MassTable load(const std::filesystem::path &path);

  std::optional<double> mass(std::string_view symbol) const;
  double proton_mass() const { return proton_mass_; }
  std::size_t size() const { return masses_.size(); }

private:
  std::map<std::string, double, std::less<>> masses_;
  double proton_mass_ = kProtonMass;
};

/// Sum of count x monoisotopic mass. Throws ChemError kUnknownElement when
/// the table lacks an element.
double monoisotopic_mass(const ElementCounts &counts,
                         const MassTable &table = MassTable::builtin());

} // namespace msbench::chem

#endif // MSBENCH_CHEM_FORMULA_H_
