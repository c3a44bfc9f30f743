//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/protocol/response.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace msbench::protocol {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &c: out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front()))
    s.remove_prefix(1);
  while (!s.empty() && is_space(s.back()))
    s.remove_suffix(1);
  return s;
}

// Content of the first well-formed <tag>...</tag> pair.
std::optional<std::string_view> block(std::string_view raw, const std::string &lc,
                                      std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  for (auto c = lc.find(close); c != std::string::npos; c = lc.find(close, c + 1)) {
    const auto o = lc.rfind(open, c);
    if (o != std::string::npos)
      return raw.substr(o + open.size(), c - o - open.size());
  }
  return std::nullopt;
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

// The part of the answer that lists candidates.
std::string candidate_region(std::string_view body) {
  const std::vector<std::string_view> lines = lines_of(body);
  for (std::size_t i = lines.size(); i-- > 0;) {
    const std::string lc = lower(lines[i]);
    const auto label = lc.find("smiles");
    if (label == std::string::npos)
      continue;
    const auto colon = lc.find(':', label);
    if (colon == std::string::npos)
      continue;
    std::string out(lines[i].substr(colon + 1));
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      out += '\n';
      out += lines[j];
    }
    return out;
  }
  return std::string(body);
}

// Strips list markers, quotes and trailing punctuation; keeps the first word.
std::string clean_token(std::string_view tok) {
  tok = trim(tok);
  std::size_t digits = 0;
  while (digits < tok.size() && std::isdigit(static_cast<unsigned char>(tok[digits])))
    ++digits;
  if (digits > 0 && digits < tok.size() && (tok[digits] == '.' || tok[digits] == ')'))
    tok = trim(tok.substr(digits + 1));
  if (tok.size() >= 2 && (tok[0] == '-' || tok[0] == '*') && is_space(tok[1]))
    tok = trim(tok.substr(2));
  const auto space = std::find_if(tok.begin(), tok.end(), is_space);
  tok = tok.substr(0, static_cast<std::size_t>(space - tok.begin()));
  auto is_quote = [](char c) { return c == '"' || c == '\'' || c == '`'; };
  while (!tok.empty() && is_quote(tok.front()))
    tok.remove_prefix(1);
  while (!tok.empty() && (is_quote(tok.back()) || tok.back() == '.' || tok.back() == ';'
                          || tok.back() == ':'))
    tok.remove_suffix(1);
  return std::string(tok);
}

} // namespace

int word_count(std::string_view text) {
  int n = 0;
  bool in_word = false;
  for (const char c: text) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

ParsedResponse parse_response(std::string_view raw) {
  ParsedResponse out;
  out.raw = std::string(raw);
  const std::string lc = lower(raw);

  if (const auto think = block(raw, lc, "think")) {
    out.has_think = true;
    out.think_text = std::string(*think);
    out.cot_word_count = word_count(*think);
  }

  if (const auto answer = block(raw, lc, "answer")) {
    const std::string region = candidate_region(*answer);
    std::size_t pos = 0;
    while (pos <= region.size() && out.candidates.size() < kMaxCandidates) {
      const auto end = region.find_first_of(",\n", pos);
      const std::string tok = clean_token(std::string_view(region).substr(
          pos, end == std::string::npos ? std::string::npos : end - pos));
      if (!tok.empty())
        out.candidates.push_back(tok);
      if (end == std::string::npos)
        break;
      pos = end + 1;
    }
    out.has_answer = !out.candidates.empty();
  }
  return out;
}

std::vector<std::string> truncate_candidates(const ParsedResponse &parsed, int k) {
  if (k < 1)
    throw std::invalid_argument("k must be >= 1");
  const auto n = std::min(parsed.candidates.size(), static_cast<std::size_t>(k));
  return { parsed.candidates.begin(), parsed.candidates.begin() + static_cast<long>(n) };
}

} // namespace msbench::protocol
