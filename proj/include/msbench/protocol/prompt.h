//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_PROTOCOL_PROMPT_H_
#define MSBENCH_PROTOCOL_PROMPT_H_

#include <array>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "msbench/data/dataset.h"

namespace msbench::protocol {

/// Tokens substituted into a template, without angle brackets.
inline constexpr std::array<std::string_view, 6> kPlaceholders = {
  "mzs", "intensities", "formula", "instrument", "adduct", "collision_energy",
};

enum class TemplateErrorKind { kMissingPlaceholder, kUnknownPlaceholder };

class TemplateError: public std::runtime_error {
public:
  TemplateError(TemplateErrorKind kind, std::string placeholder);

  TemplateErrorKind kind() const { return kind_; }
  const std::string &placeholder() const { return placeholder_; }

private:
  TemplateErrorKind kind_;
  std::string placeholder_;
};

struct PromptInstance {
  std::string record_id;
  std::string text;
  std::string template_version;
};

/// A validated prompt template. The part before the first `<think>` is the
/// instruction header: every `<name>` token there must be one of
/// kPlaceholders. The remainder is the answer skeleton shown to the model;
/// its other `<name>` tokens are left for the model to fill in. Each
/// placeholder must occur at least once.
class PromptTemplate {
public:
  /// Throws TemplateError.
  static PromptTemplate parse(std::string text);
  static PromptTemplate load(const std::filesystem::path &path);
  /// The five-step reasoning template shipped with the library.
  static const PromptTemplate &builtin();

  const std::string &text() const { return text_; }
  /// First 16 hex digits of the SHA-256 of the template text.
  const std::string &version() const { return version_; }

  PromptInstance render(const data::SpectrumRecord &record) const;

private:
  std::string text_;
  std::string version_;
};

PromptInstance render_prompt(const data::SpectrumRecord &record, std::string_view template_text);

/// "[53.0024, 57.07]": up to `decimals` places, trailing zeros dropped but
/// at least one decimal kept.
std::string format_number_list(std::span<const double> values, int decimals);
std::string format_decimal(double value, int decimals);

} // namespace msbench::protocol

#endif // MSBENCH_PROTOCOL_PROMPT_H_
