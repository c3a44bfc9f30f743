//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/chem/element.h"

#include <array>
#include <cstdlib>

namespace msbench::chem {
namespace {
constexpr std::array<std::string_view, 119> kSymbols {
  "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
  "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
  "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
  "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
  "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
  "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
  "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
  "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
  "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

constexpr std::array<int, 1> kVal1 { 1 };
constexpr std::array<int, 1> kVal2 { 2 };
constexpr std::array<int, 1> kVal3 { 3 };
constexpr std::array<int, 1> kVal4 { 4 };
constexpr std::array<int, 2> kVal35 { 3, 5 };
constexpr std::array<int, 3> kVal135 { 1, 3, 5 };
constexpr std::array<int, 3> kVal246 { 2, 4, 6 };

// Main-group column used by the charge shift; 0 for unmodelled elements.
int valence_group(int z) {
  switch (z) {
  case 1:
    return 1;
  case 5:
    return 13;
  case 6:
  case 14:
    return 14;
  case 7:
  case 15:
  case 33:
    return 15;
  case 8:
  case 16:
  case 34:
  case 52:
    return 16;
  case 9:
  case 17:
  case 35:
  case 53:
    return 17;
  default:
    return 0;
  }
}
} // namespace

std::optional<Element> Element::from_symbol(std::string_view symbol) {
  if (symbol.empty())
    return std::nullopt;
  for (std::size_t z = 1; z < kSymbols.size(); ++z) {
    if (kSymbols[z] == symbol)
      return Element(static_cast<int>(z));
  }
  return std::nullopt;
}

std::string_view Element::symbol() const {
  return z_ < kSymbols.size() ? kSymbols[z_] : std::string_view {};
}

std::span<const int> Element::default_valences() const {
  switch (z_) {
  case 1:
  case 9:
  case 17:
  case 35:
    return kVal1;
  case 53:
    return kVal135;
  case 5:
    return kVal3;
  case 6:
  case 14:
    return kVal4;
  case 7:
    return kVal3;
  case 8:
    return kVal2;
  case 15:
  case 33:
    return kVal35;
  case 16:
  case 34:
  case 52:
    return kVal246;
  default:
    return {};
  }
}

bool Element::is_organic_subset() const {
  switch (z_) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 9:
  case 15:
  case 16:
  case 17:
  case 35:
  case 53:
    return true;
  default:
    return false;
  }
}

bool Element::can_be_aromatic() const {
  switch (z_) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 15:
  case 16:
  case 33:
  case 34:
  case 52:
    return true;
  default:
    return false;
  }
}

bool Element::has_lone_pair() const {
  const int g = valence_group(z_);
  return g == 15 || g == 16;
}

int allowed_valences(Element element, int charge, std::span<int, 4> out) {
  const std::span<const int> base = element.default_valences();
  const int group = valence_group(element.atomic_number());
  int n = 0;
  for (const int v: base) {
    int shifted = v;
    switch (group) {
    case 15:
    case 16:
    case 17:
      shifted = v + charge;
      break;
    case 14:
    case 1:
      shifted = v - std::abs(charge);
      break;
    case 13:
      shifted = v - charge;
      break;
    default:
      break;
    }
    if (shifted < 0)
      continue;
    if (n > 0 && out[n - 1] == shifted)
      continue;
    out[n++] = shifted;
  }
  return n;
}

} // namespace msbench::chem
