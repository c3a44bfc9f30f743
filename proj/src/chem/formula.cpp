//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/chem/formula.h"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "masses_data.h"

namespace msbench::chem {

void ElementCounts::add(std::string_view symbol, int n) {
  if (n == 0)
    return;
  auto it = counts_.find(symbol);
  const int current = it == counts_.end() ? 0 : it->second;
  const int next = current + n;
  if (next < 0)
    throw std::invalid_argument("negative element count for "
                                + std::string(symbol));
  if (next == 0) {
    counts_.erase(it);
  } else if (it == counts_.end()) {
    counts_.emplace(std::string(symbol), next);
  } else {
    it->second = next;
  }
}

int ElementCounts::count(std::string_view symbol) const {
  auto it = counts_.find(symbol);
  return it == counts_.end() ? 0 : it->second;
}

ElementCounts &ElementCounts::operator+=(const ElementCounts &other) {
  for (const auto &[sym, n]: other.counts_)
    add(sym, n);
  return *this;
}

Rational::Rational(long long num, long long den) {
  if (den == 0)
    throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

std::string Rational::to_string() const {
  if (den_ == 1)
    return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

ElementCounts molecular_formula(const Molecule &mol) {
  ElementCounts counts;
  int hydrogens = 0;
  for (int a = 0; a < mol.num_atoms(); ++a) {
    counts.add(mol.atom(a).element.symbol(), 1);
    hydrogens += mol.total_h(a);
  }
  counts.add("H", hydrogens);
  return counts;
}

ElementCounts parse_formula(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t'
                           || text.back() == '\r' || text.back() == '\n'))
    text.remove_suffix(1);
  if (text.empty())
    throw ChemError(ChemErrorKind::kBadFormulaSyntax, "empty formula");

  ElementCounts counts;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c < 'A' || c > 'Z')
      throw ChemError(ChemErrorKind::kBadFormulaSyntax,
                      "expected element symbol at position " + std::to_string(i)
                          + " in '" + std::string(text) + "'");
    std::size_t len = 1;
    if (i + 1 < text.size() && text[i + 1] >= 'a' && text[i + 1] <= 'z')
      len = 2;
    const std::string_view sym = text.substr(i, len);
    if (!Element::from_symbol(sym))
      throw ChemError(ChemErrorKind::kUnknownElement,
                      "unknown element '" + std::string(sym) + "' in formula");
    i += len;

    int n = 1;
    if (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      const char *first = text.data() + i;
      const char *last = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(first, last, n);
      if (ec != std::errc() || n <= 0)
        throw ChemError(ChemErrorKind::kBadFormulaSyntax,
                        "bad count for " + std::string(sym));
      i += static_cast<std::size_t>(ptr - first);
    }
    counts.add(sym, n);
  }
  return counts;
}

std::string canonical_formula(const ElementCounts &counts) {
  std::string out;
  auto put = [&](std::string_view sym, int n) {
    out += sym;
    if (n != 1)
      out += std::to_string(n);
  };
  const bool carbon = counts.count("C") > 0;
  if (carbon) {
    put("C", counts.count("C"));
    if (counts.count("H") > 0)
      put("H", counts.count("H"));
  }
  for (const auto &[sym, n]: counts.entries()) {
    if (carbon && (sym == "C" || sym == "H"))
      continue;
    put(sym, n);
  }
  return out;
}

Rational dbe(const ElementCounts &c) {
  const long long tetravalent = c.count("C") + c.count("Si");
  const long long monovalent = c.count("H") + c.count("F") + c.count("Cl")
                               + c.count("Br") + c.count("I");
  const long long trivalent = c.count("N") + c.count("P");
  return Rational(2 * tetravalent - monovalent + trivalent + 2, 2);
}

const MassTable &MassTable::builtin() {
  static const MassTable table = MassTable::parse(embedded::kMassesTsv);
  return table;
}

MassTable MassTable::parse(std::string_view text) {
  MassTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty() || line.front() == '#')
      continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw std::runtime_error("mass table line " + std::to_string(line_no)
                               + ": expected element<TAB>mass");
    const std::string_view sym = line.substr(0, tab);
    const std::string_view value = line.substr(tab + 1);
    double mass = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), mass);
    if (ec != std::errc() || ptr != value.data() + value.size() || mass <= 0)
      throw std::runtime_error("mass table line " + std::to_string(line_no)
                               + ": bad mass '" + std::string(value) + "'");
    if (!Element::from_symbol(sym))
      throw ChemError(ChemErrorKind::kUnknownElement,
                      "mass table line " + std::to_string(line_no) + ": '"
                          + std::string(sym) + "'");
    table.masses_[std::string(sym)] = mass;
  }
  return table;
}

MassTable MassTable::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read mass table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<double> MassTable::mass(std::string_view symbol) const {
  auto it = masses_.find(symbol);
  if (it == masses_.end())
    return std::nullopt;
  return it->second;
}

double monoisotopic_mass(const ElementCounts &counts, const MassTable &table) {
  double total = 0;
  for (const auto &[sym, n]: counts.entries()) {
    const auto m = table.mass(sym);
    if (!m)
      throw ChemError(ChemErrorKind::kUnknownElement,
                      "no monoisotopic mass for " + sym);
    total += *m * n;
  }
  return total;
}

} // namespace msbench::chem
