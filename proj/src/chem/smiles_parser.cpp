//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msbench/chem/molecule.h"

namespace msbench::chem {
namespace {

struct OpenRing {
  int atom = -1;
  std::optional<BondOrder> order;
};

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

bool is_upper(char c) {
  return c >= 'A' && c <= 'Z';
}

bool is_lower(char c) {
  return c >= 'a' && c <= 'z';
}

class SmilesParser {
public:
  explicit SmilesParser(std::string_view text): text_(text) { }

  Molecule parse() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '[') {
        add_atom(parse_bracket_atom());
      } else if (is_upper(c) || is_lower(c) || c == '*') {
        add_atom(parse_organic_atom());
      } else if (c == '(') {
        open_branch();
      } else if (c == ')') {
        close_branch();
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/'
                 || c == '\\' || c == '$') {
        parse_bond_symbol(c);
      } else if (is_digit(c) || c == '%') {
        ring_bond();
      } else if (c == '.') {
        if (pending_ || pending_directional_)
          fail(ChemErrorKind::kSyntaxError, "bond before '.'");
        if (!branches_.empty())
          fail(ChemErrorKind::kSyntaxError, "'.' inside a branch");
        prev_ = -1;
        ++pos_;
      } else {
        fail(ChemErrorKind::kSyntaxError,
             std::string("unexpected character '") + c + "'");
      }
    }

    if (pending_ || pending_directional_)
      fail(ChemErrorKind::kSyntaxError, "dangling bond at end of input");
    if (!branches_.empty())
      fail(ChemErrorKind::kUnbalancedParen, "unclosed '('");
    for (std::size_t i = 0; i < rings_.size(); ++i) {
      if (rings_[i].atom >= 0)
        fail(ChemErrorKind::kUnclosedRing,
             "ring bond " + std::to_string(i) + " never closed");
    }
    if (mol_.num_atoms() == 0)
      fail(ChemErrorKind::kEmptyInput, "no atoms");
    return std::move(mol_);
  }

private:
  [[noreturn]] void fail(ChemErrorKind kind, const std::string &what) const {
    throw ChemError(kind, what + " at position " + std::to_string(pos_));
  }

  bool has_pending() const { return pending_.has_value() || pending_directional_; }

  void add_atom(const Atom &atom) {
    const int idx = mol_.add_atom(atom);
    if (prev_ >= 0) {
      mol_.add_bond(prev_, idx, resolve_order(prev_, idx, pending_));
    } else if (has_pending()) {
      fail(ChemErrorKind::kSyntaxError, "bond symbol without a preceding atom");
    }
    pending_.reset();
    pending_directional_ = false;
    prev_ = idx;
    branch_has_atom_ = true;
  }

  BondOrder resolve_order(int a, int b, std::optional<BondOrder> given) const {
    if (given)
      return *given;
    if (mol_.atom(a).aromatic && mol_.atom(b).aromatic)
      return BondOrder::kAromatic;
    return BondOrder::kSingle;
  }

  Atom parse_organic_atom() {
    Atom atom;
    const char c = text_[pos_];
    if (c == '*')
      fail(ChemErrorKind::kUnknownElement, "wildcard atom '*' is not supported");

    std::string_view sym;
    if (c == 'C' && peek(1) == 'l') {
      sym = "Cl";
    } else if (c == 'B' && peek(1) == 'r') {
      sym = "Br";
    } else {
      sym = text_.substr(pos_, 1);
    }

    if (is_lower(c)) {
      static constexpr std::array<std::string_view, 6> kAromatic {
        "b", "c", "n", "o", "p", "s"
      };
      bool ok = false;
      for (const auto a: kAromatic)
        ok = ok || a == sym;
      if (!ok)
        fail(ChemErrorKind::kUnknownElement,
             "'" + std::string(sym) + "' is not an organic-subset symbol");
      const char upper = static_cast<char>(std::toupper(c));
      atom.element = *Element::from_symbol(std::string_view(&upper, 1));
      atom.aromatic = true;
    } else {
      const auto elem = Element::from_symbol(sym);
      if (!elem || !elem->is_organic_subset())
        fail(ChemErrorKind::kUnknownElement,
             "'" + std::string(sym) + "' must be written in brackets");
      atom.element = *elem;
    }
    pos_ += sym.size();
    return atom;
  }

  Atom parse_bracket_atom() {
    const std::size_t start = pos_;
    ++pos_;  // '['
    Atom atom;

    if (is_digit(cur())) {
      int iso = 0;
      int ndigits = 0;
      while (is_digit(cur())) {
        iso = iso * 10 + (cur() - '0');
        ++pos_;
        if (++ndigits > 3)
          fail(ChemErrorKind::kBadBracketAtom, "isotope out of range");
      }
      atom.isotope = iso;
    }

    // Element symbol: two-letter forms take precedence.
    if (is_upper(cur())) {
      std::optional<Element> elem;
      if (is_lower(peek(1))) {
        elem = Element::from_symbol(text_.substr(pos_, 2));
        if (elem)
          pos_ += 2;
      }
      if (!elem) {
        elem = Element::from_symbol(text_.substr(pos_, 1));
        if (!elem)
          fail(ChemErrorKind::kUnknownElement, "unknown element in brackets");
        pos_ += 1;
      }
      atom.element = *elem;
    } else if (is_lower(cur())) {
      std::optional<Element> elem;
      for (const std::size_t len: { std::size_t { 2 }, std::size_t { 1 } }) {
        if (pos_ + len > text_.size())
          continue;
        std::string sym(text_.substr(pos_, len));
        if (len == 2 && !is_lower(sym[1]))
          continue;
        sym[0] = static_cast<char>(std::toupper(sym[0]));
        elem = Element::from_symbol(sym);
        if (elem && elem->can_be_aromatic()) {
          pos_ += len;
          break;
        }
        elem.reset();
      }
      if (!elem)
        fail(ChemErrorKind::kUnknownElement, "unknown aromatic symbol in brackets");
      atom.element = *elem;
      atom.aromatic = true;
    } else if (cur() == '*') {
      fail(ChemErrorKind::kUnknownElement, "wildcard atom '*' is not supported");
    } else {
      fail(ChemErrorKind::kBadBracketAtom, "missing element symbol");
    }

    // Chirality, discarded.
    if (cur() == '@') {
      ++pos_;
      if (cur() == '@') {
        ++pos_;
      } else if (is_upper(cur()) && is_upper(peek(1))) {
        pos_ += 2;
        if (!is_digit(cur()))
          fail(ChemErrorKind::kBadBracketAtom, "bad chirality class");
        while (is_digit(cur()))
          ++pos_;
      }
    }

    int hcount = 0;
    if (cur() == 'H') {
      ++pos_;
      hcount = 1;
      if (is_digit(cur())) {
        hcount = cur() - '0';
        ++pos_;
        if (is_digit(cur()))
          fail(ChemErrorKind::kBadBracketAtom, "hydrogen count above 9");
      }
    }
    atom.explicit_h = hcount;

    if (cur() == '+' || cur() == '-') {
      const char sign = cur();
      const int unit = sign == '+' ? 1 : -1;
      ++pos_;
      int magnitude = 1;
      if (is_digit(cur())) {
        magnitude = 0;
        while (is_digit(cur())) {
          magnitude = magnitude * 10 + (cur() - '0');
          ++pos_;
        }
        if (magnitude > 15)
          fail(ChemErrorKind::kBadBracketAtom, "charge out of range");
      } else {
        while (cur() == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.formal_charge = unit * magnitude;
    }

    if (cur() == ':') {
      ++pos_;
      if (!is_digit(cur()))
        fail(ChemErrorKind::kBadBracketAtom, "bad atom class");
      while (is_digit(cur()))
        ++pos_;
    }

    if (cur() != ']') {
      if (pos_ >= text_.size())
        fail(ChemErrorKind::kBadBracketAtom, "unterminated bracket atom");
      fail(ChemErrorKind::kBadBracketAtom,
           "unexpected '" + std::string(1, cur()) + "' in bracket atom starting at "
               + std::to_string(start));
    }
    ++pos_;
    return atom;
  }

  void open_branch() {
    if (prev_ < 0)
      fail(ChemErrorKind::kSyntaxError, "branch without a preceding atom");
    if (has_pending())
      fail(ChemErrorKind::kSyntaxError, "bond symbol before '('");
    branches_.push_back(prev_);
    branch_has_atom_ = false;
    ++pos_;
  }

  void close_branch() {
    if (branches_.empty())
      fail(ChemErrorKind::kUnbalancedParen, "unmatched ')'");
    if (has_pending())
      fail(ChemErrorKind::kSyntaxError, "dangling bond before ')'");
    if (!branch_has_atom_)
      fail(ChemErrorKind::kSyntaxError, "empty branch");
    prev_ = branches_.back();
    branches_.pop_back();
    ++pos_;
  }

  void parse_bond_symbol(char c) {
    if (has_pending())
      fail(ChemErrorKind::kSyntaxError, "consecutive bond symbols");
    switch (c) {
    case '-':
      pending_ = BondOrder::kSingle;
      break;
    case '=':
      pending_ = BondOrder::kDouble;
      break;
    case '#':
      pending_ = BondOrder::kTriple;
      break;
    case ':':
      pending_ = BondOrder::kAromatic;
      break;
    case '/':
    case '\\':
      // Directional single bond; the direction is dropped.
      pending_directional_ = true;
      break;
    default:
      fail(ChemErrorKind::kSyntaxError, "quadruple bonds are not supported");
    }
    ++pos_;
  }

  void ring_bond() {
    if (prev_ < 0)
      fail(ChemErrorKind::kSyntaxError, "ring bond without a preceding atom");
    int number = 0;
    if (cur() == '%') {
      if (!is_digit(peek(1)) || !is_digit(peek(2)))
        fail(ChemErrorKind::kSyntaxError, "'%' must be followed by two digits");
      number = (peek(1) - '0') * 10 + (peek(2) - '0');
      pos_ += 3;
    } else {
      number = cur() - '0';
      ++pos_;
    }

    OpenRing &slot = rings_[number];
    if (slot.atom < 0) {
      slot.atom = prev_;
      slot.order = pending_;
    } else {
      std::optional<BondOrder> order = slot.order;
      if (pending_) {
        if (order && *order != *pending_)
          fail(ChemErrorKind::kSyntaxError, "conflicting ring-closure bond symbols");
        order = pending_;
      }
      if (slot.atom == prev_)
        fail(ChemErrorKind::kSyntaxError, "ring closure to the same atom");
      mol_.add_bond(slot.atom, prev_, resolve_order(slot.atom, prev_, order));
      slot = OpenRing {};
    }
    pending_.reset();
    pending_directional_ = false;
  }

  char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char peek(std::size_t off) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Molecule mol_;
  int prev_ = -1;
  std::optional<BondOrder> pending_;
  bool pending_directional_ = false;
  bool branch_has_atom_ = true;
  std::vector<int> branches_;
  std::array<OpenRing, 100> rings_ {};
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

} // namespace

Molecule parse_smiles(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty())
    throw ChemError(ChemErrorKind::kEmptyInput, "empty SMILES");
  return SmilesParser(body).parse();
}

} // namespace msbench::chem
