//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_CHEM_ELEMENT_H_
#define MSBENCH_CHEM_ELEMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace msbench::chem {

/// A chemical element identified by its atomic number (1..118).
class Element {
public:
  constexpr Element() = default;
  constexpr explicit Element(int atomic_number)
      : z_(static_cast<std::uint8_t>(atomic_number)) { }

  /// Looks up a case-sensitive element symbol ("C", "Cl", "Se").
  static std::optional<Element> from_symbol(std::string_view symbol);

  constexpr int atomic_number() const { return z_; }
  std::string_view symbol() const;

  /// Allowed neutral valences in ascending order; empty when the element has
  /// no valence model (metals and other bracket-only elements).
  std::span<const int> default_valences() const;

  /// True for B C N O P S F Cl Br I, which may appear outside brackets.
  bool is_organic_subset() const;

  /// True for elements whose aromatic lowercase form is accepted.
  bool can_be_aromatic() const;

  /// True when a ring atom of this element without a ring double bond donates
  /// a lone pair to the pi system (N, P, As, O, S, Se, Te).
  bool has_lone_pair() const;

  constexpr auto operator<=>(const Element &) const = default;

private:
  std::uint8_t z_ = 0;
};

namespace elements {
inline constexpr Element kH { 1 };
inline constexpr Element kB { 5 };
inline constexpr Element kC { 6 };
inline constexpr Element kN { 7 };
inline constexpr Element kO { 8 };
inline constexpr Element kF { 9 };
inline constexpr Element kSi { 14 };
inline constexpr Element kP { 15 };
inline constexpr Element kS { 16 };
inline constexpr Element kCl { 17 };
inline constexpr Element kAs { 33 };
inline constexpr Element kSe { 34 };
inline constexpr Element kBr { 35 };
inline constexpr Element kI { 53 };
} // namespace elements

/// Writes the allowed valences of `element` carrying `charge` into `out`,
/// applying the isoelectronic shift (N+ behaves like C, O- like F, C- like N).
/// Returns the number of values written (0 if the element has no model).
int allowed_valences(Element element, int charge, std::span<int, 4> out);

} // namespace msbench::chem

#endif // MSBENCH_CHEM_ELEMENT_H_
