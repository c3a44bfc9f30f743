//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/eval/scoring.h"

#include <algorithm>
#include <cctype>
#include <vector>

#include "msbench/chem/canonical.h"
#include "msbench/similarity/fingerprint.h"

namespace msbench::eval {
namespace {

using chem::Molecule;

bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

// Numbers such as "0", "-2", "5.5" or "11/2", in order of appearance.
std::vector<chem::Rational> numbers_in(std::string_view s) {
  std::vector<chem::Rational> out;
  std::size_t i = 0;
  auto digits = [&](std::size_t from) {
    std::size_t j = from;
    while (j < s.size() && is_digit(s[j]))
      ++j;
    return j;
  };
  while (i < s.size()) {
    if (!is_digit(s[i])) {
      ++i;
      continue;
    }
    const bool negative = i > 0 && s[i - 1] == '-';
    std::size_t end = digits(i);
    std::string whole(s.substr(i, end - i));
    std::string frac;
    if (end + 1 < s.size() && s[end] == '.' && is_digit(s[end + 1])) {
      const std::size_t fend = digits(end + 1);
      frac = std::string(s.substr(end + 1, fend - end - 1));
      end = fend;
    }
    std::string denom;
    if (frac.empty() && end + 1 < s.size() && s[end] == '/' && is_digit(s[end + 1])) {
      const std::size_t dend = digits(end + 1);
      denom = std::string(s.substr(end + 1, dend - end - 1));
      end = dend;
    }
    i = end;
    if (whole.size() + frac.size() > 15 || denom.size() > 15)
      continue;
    long long num = std::stoll(whole + frac);
    long long den = 1;
    for (std::size_t f = 0; f < frac.size(); ++f)
      den *= 10;
    if (!denom.empty())
      den = std::stoll(denom);
    if (den == 0)
      continue;
    out.emplace_back(negative ? -num : num, den);
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    out.push_back(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    if (nl == std::string_view::npos)
      break;
    pos = nl + 1;
  }
  return out;
}

struct Candidate {
  std::optional<Molecule> mol;
  std::string canonical;
};

} // namespace

std::optional<chem::Rational> stated_dbe(std::string_view think_text) {
  static constexpr std::string_view kLabel = "Double Bond Equivalents (DBE)";
  for (const std::string_view line: lines_of(think_text)) {
    const auto at = line.find(kLabel);
    if (at == std::string_view::npos)
      continue;
    const std::string_view rest = line.substr(at + kLabel.size());
    const auto eq = rest.rfind('=');
    if (eq != std::string_view::npos) {
      const auto nums = numbers_in(rest.substr(eq + 1));
      if (nums.empty())
        return std::nullopt;
      return nums.back();
    }
    const auto nums = numbers_in(rest);
    if (nums.empty())
      return std::nullopt;
    return nums.front();
  }
  return std::nullopt;
}

std::optional<chem::ElementCounts> stated_formula(std::string_view think_text) {
  static constexpr std::string_view kLabel = "Formula:";
  for (const std::string_view line: lines_of(think_text)) {
    const auto at = line.find(kLabel);
    if (at == std::string_view::npos)
      continue;
    std::string_view rest = line.substr(at + kLabel.size());
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front())))
      rest.remove_prefix(1);
    std::size_t end = 0;
    while (end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[end])))
      ++end;
    std::string_view token = rest.substr(0, end);
    while (!token.empty() && (token.back() == '.' || token.back() == ',' || token.back() == ';'))
      token.remove_suffix(1);
    try {
      return chem::parse_formula(token);
    } catch (const chem::ChemError &) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

PerSpectrumMetrics score_spectrum(const data::SpectrumRecord &record,
                                  const protocol::ParsedResponse &parsed,
                                  const ScoringOptions &options) {
  const int k = std::max(1, options.k);
  PerSpectrumMetrics m;
  m.record_id = record.id;
  m.k = k;
  m.has_think = parsed.has_think;
  m.has_answer = parsed.has_answer;
  m.n_candidates = static_cast<int>(parsed.candidates.size());

  const Molecule truth = chem::molecule_from_smiles(record.ground_truth);
  const chem::ElementCounts truth_formula = chem::molecular_formula(truth);
  const std::string truth_canonical = chem::canonical_smiles(truth);
  m.bin = data::weight_bin_for_mass(chem::monoisotopic_mass(truth_formula));

  std::vector<Candidate> cands(parsed.candidates.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    cands[i].mol = chem::try_molecule_from_smiles(parsed.candidates[i]);
    if (cands[i].mol)
      ++m.n_valid;
  }
  m.validity_top1 = !cands.empty() && cands[0].mol.has_value();

  const auto first_valid = std::find_if(cands.begin(), cands.end(),
                                        [](const Candidate &c) { return c.mol.has_value(); });
  if (first_valid != cands.end()) {
    const chem::ElementCounts f = chem::molecular_formula(*first_valid->mol);
    m.formula_consistent_any = f == record.formula;
    m.dbe_correct_top1 = chem::dbe(f) == chem::dbe(truth_formula);
  }

  // Exact match looks at the first k candidates, valid or not.
  for (std::size_t i = 0; i < cands.size() && i < static_cast<std::size_t>(k); ++i) {
    if (!cands[i].mol)
      continue;
    cands[i].canonical = chem::canonical_smiles(*cands[i].mol);
    if (cands[i].canonical == truth_canonical) {
      m.exact_topk = true;
      if (i == 0)
        m.exact_top1 = true;
    }
  }

  // Similarity scans the first k valid candidates.
  std::vector<const Candidate *> valid;
  for (const Candidate &c: cands) {
    if (c.mol && static_cast<int>(valid.size()) < k)
      valid.push_back(&c);
  }
  if (valid.empty())
    return m;

  const similarity::Fingerprint truth_fp =
      similarity::morgan_fingerprint(truth, options.fp_radius, options.fp_nbits);
  std::vector<std::string> seen;
  for (std::size_t r = 0; r < valid.size(); ++r) {
    const Candidate &c = *valid[r];
    std::string canonical = c.canonical.empty() ? chem::canonical_smiles(*c.mol) : c.canonical;
    const bool repeat = std::find(seen.begin(), seen.end(), canonical) != seen.end();
    if (!repeat) {
      const double t = similarity::tanimoto(
          truth_fp, similarity::morgan_fingerprint(*c.mol, options.fp_radius, options.fp_nbits));
      if (r == 0)
        m.mts_top1 = t;
      m.mts_topk = std::max(m.mts_topk, t);
    }

    if (repeat || (r > 0 && m.mces_topk == 0.0)) {
      seen.push_back(std::move(canonical));
      continue;
    }
    double d = 1.0;
    if (canonical == truth_canonical) {
      d = similarity::mces_dissimilarity_for(truth, *c.mol, truth.num_bonds());
    } else {
      const int bound = similarity::mces_upper_bound(truth, *c.mol);
      const double floor = similarity::mces_dissimilarity_for(truth, *c.mol, bound);
      if (r > 0 && floor >= m.mces_topk) {
        seen.push_back(std::move(canonical));
        continue;
      }
      const similarity::McesResult res = similarity::mces(truth, *c.mol, options.mces_budget);
      ++m.mces_pairs;
      if (!res.optimal) {
        ++m.mces_pairs_truncated;
        m.mces_truncated = true;
      }
      d = res.dissimilarity;
    }
    if (r == 0)
      m.mces_top1 = d;
    m.mces_topk = std::min(m.mces_topk, d);
    seen.push_back(std::move(canonical));
  }
  m.mts_topk = std::max(m.mts_topk, m.mts_top1);
  return m;
}

CotAudit audit_cot(const protocol::ParsedResponse &parsed, const data::SpectrumRecord &record) {
  CotAudit a;
  a.record_id = record.id;
  a.has_think = parsed.has_think;
  a.word_count = parsed.cot_word_count;
  if (!parsed.has_think || !parsed.think_text)
    return a;

  a.stated_dbe = stated_dbe(*parsed.think_text);
  a.stated_formula = stated_formula(*parsed.think_text);

  std::optional<chem::ElementCounts> truth_formula;
  if (const auto truth = chem::try_molecule_from_smiles(record.ground_truth))
    truth_formula = chem::molecular_formula(*truth);
  if (a.stated_dbe && truth_formula)
    a.dbe_claim_correct = *a.stated_dbe == chem::dbe(*truth_formula);
  if (a.stated_formula)
    a.formula_claim_correct = *a.stated_formula == record.formula;

  std::optional<chem::ElementCounts> top1;
  for (const std::string &s: parsed.candidates) {
    if (const auto mol = chem::try_molecule_from_smiles(s)) {
      top1 = chem::molecular_formula(*mol);
      break;
    }
  }
  if (top1) {
    a.contradiction = (a.stated_dbe && *a.stated_dbe != chem::dbe(*top1))
                      || (a.stated_formula && *a.stated_formula != *top1);
  }
  return a;
}

} // namespace msbench::eval
