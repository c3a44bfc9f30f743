//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/protocol/prompt.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "msbench/util/digest.h"
#include "prompt_template_data.h"

namespace msbench::protocol {
namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// A `<name>` token at `pos`, or nullopt.
std::optional<std::string_view> token_at(std::string_view text, std::size_t pos) {
  if (text[pos] != '<')
    return std::nullopt;
  std::size_t end = pos + 1;
  while (end < text.size() && is_name_char(text[end]))
    ++end;
  if (end == pos + 1 || end >= text.size() || text[end] != '>')
    return std::nullopt;
  return text.substr(pos + 1, end - pos - 1);
}

bool is_placeholder(std::string_view name) {
  return std::find(kPlaceholders.begin(), kPlaceholders.end(), name) != kPlaceholders.end();
}

std::string_view header_of(std::string_view text) {
  const auto think = text.find("<think>");
  return think == std::string_view::npos ? text : text.substr(0, think);
}

std::string substitute(std::string_view text, const data::SpectrumRecord &r) {
  auto value = [&](std::string_view name) -> std::string {
    if (name == "mzs")
      return format_number_list(r.mzs, 4);
    if (name == "intensities")
      return format_number_list(r.intensities, 3);
    if (name == "formula")
      return chem::canonical_formula(r.formula);
    if (name == "instrument")
      return r.instrument.empty() ? "unknown" : r.instrument;
    if (name == "adduct")
      return r.adduct.empty() ? "unknown" : r.adduct;
    return r.collision_energy ? format_decimal(*r.collision_energy, 4) : "unknown";
  };
  std::string out;
  out.reserve(text.size() + 256);
  for (std::size_t i = 0; i < text.size();) {
    const auto tok = token_at(text, i);
    if (tok && is_placeholder(*tok)) {
      out += value(*tok);
      i += tok->size() + 2;
    } else {
      out += text[i++];
    }
  }
  return out;
}

} // namespace

TemplateError::TemplateError(TemplateErrorKind kind, std::string placeholder)
    : std::runtime_error(std::string(kind == TemplateErrorKind::kMissingPlaceholder
                                         ? "MissingPlaceholder: template lacks <"
                                         : "UnknownPlaceholder: template has <")
                         + placeholder + ">"),
      kind_(kind), placeholder_(std::move(placeholder)) { }

PromptTemplate PromptTemplate::parse(std::string text) {
  const std::string_view header = header_of(text);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto tok = token_at(header, i);
    if (tok && !is_placeholder(*tok))
      throw TemplateError(TemplateErrorKind::kUnknownPlaceholder, std::string(*tok));
  }
  for (const std::string_view name: kPlaceholders) {
    if (text.find("<" + std::string(name) + ">") == std::string::npos)
      throw TemplateError(TemplateErrorKind::kMissingPlaceholder, std::string(name));
  }
  PromptTemplate t;
  t.version_ = util::sha256_hex(text).substr(0, 16);
  t.text_ = std::move(text);
  return t;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const PromptTemplate &PromptTemplate::builtin() {
  static const PromptTemplate t = parse(std::string(embedded::kPromptTemplate));
  return t;
}

PromptInstance PromptTemplate::render(const data::SpectrumRecord &record) const {
  return { record.id, substitute(text_, record), version_ };
}

PromptInstance render_prompt(const data::SpectrumRecord &record, std::string_view template_text) {
  return PromptTemplate::parse(std::string(template_text)).render(record);
}

std::string format_decimal(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s.find('.') == std::string::npos)
    return s + ".0";
  while (s.back() == '0')
    s.pop_back();
  if (s.back() == '.')
    s += '0';
  return s;
}

std::string format_number_list(std::span<const double> values, int decimals) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i)
      out += ", ";
    out += format_decimal(values[i], decimals);
  }
  out += ']';
  return out;
}

} // namespace msbench::protocol
