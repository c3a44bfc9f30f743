//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "msbench/data/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "msbench/chem/molecule.h"

namespace msbench::data {
namespace {

using Json = nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// A row that failed validation.
struct Skip {
  SkipReason reason;
  std::string detail;
};

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

// "53.0 54.1", "53.0,54.1" or "[53.0, 54.1]".
std::vector<double> parse_number_list(std::string_view text, const char *field) {
  std::vector<double> out;
  std::string_view rest = trim(text);
  if (!rest.empty() && rest.front() == '[' && rest.back() == ']')
    rest = rest.substr(1, rest.size() - 2);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    const auto end = rest.find_first_of(", \t", pos);
    const std::string_view tok =
        rest.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (!tok.empty()) {
      const auto v = parse_double(tok);
      if (!v)
        throw Skip { SkipReason::kBadNumber, std::string(field) + " value '" + std::string(tok) + "'" };
      out.push_back(*v);
    }
    if (end == std::string_view::npos)
      break;
    pos = end + 1;
  }
  return out;
}

bool is_missing(std::string_view s) {
  const std::string l = lower(trim(s));
  return l.empty() || l == "nan" || l == "none" || l == "null" || l == "na";
}

// Raw field values of one row, keyed by canonical column name.
using Fields = std::map<std::string, std::string, std::less<>>;

SpectrumRecord build_record(const Fields &f, int line_no) {
  auto get = [&](std::string_view key) -> std::string_view {
    auto it = f.find(key);
    return it == f.end() ? std::string_view {} : std::string_view(it->second);
  };
  for (const char *required: { "mzs", "intensities", "smiles", "precursor_formula" }) {
    if (is_missing(get(required)))
      throw Skip { SkipReason::kMissingField, std::string("no ") + required };
  }

  SpectrumRecord r;
  r.id = std::string(trim(get("id")));
  if (r.id.empty())
    r.id = "row" + std::to_string(line_no);

  std::vector<double> mzs = parse_number_list(get("mzs"), "mzs");
  std::vector<double> raw = parse_number_list(get("intensities"), "intensities");
  if (mzs.empty())
    throw Skip { SkipReason::kEmptyPeaks, "no peaks" };
  if (mzs.size() != raw.size())
    throw Skip { SkipReason::kLengthMismatch, std::to_string(mzs.size()) + " m/z values vs "
                                                   + std::to_string(raw.size()) + " intensities" };
  if (std::any_of(mzs.begin(), mzs.end(), [](double v) { return v <= 0; }))
    throw Skip { SkipReason::kNonPositiveMz, "m/z must be positive" };
  if (std::any_of(raw.begin(), raw.end(), [](double v) { return v < 0; }))
    throw Skip { SkipReason::kNegativeIntensity, "intensity must be >= 0" };
  std::vector<double> norm;
  try {
    norm = normalize_intensities(raw);
  } catch (const DatasetError &) {
    throw Skip { SkipReason::kAllZeroIntensities, "all intensities are zero" };
  }
  std::vector<std::size_t> order(mzs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mzs[a] < mzs[b]; });
  for (const std::size_t i: order) {
    r.mzs.push_back(mzs[i]);
    r.intensities.push_back(norm[i]);
  }

  try {
    r.formula = chem::parse_formula(trim(get("precursor_formula")));
  } catch (const chem::ChemError &e) {
    throw Skip { SkipReason::kBadFormula, e.what() };
  }

  r.ground_truth = std::string(trim(get("smiles")));
  try {
    chem::molecule_from_smiles(r.ground_truth);
  } catch (const chem::ChemError &e) {
    throw Skip { SkipReason::kBadGroundTruth, e.what() };
  }

  if (!is_missing(get("adduct")))
    r.adduct = std::string(trim(get("adduct")));
  if (!is_missing(get("instrument_type")))
    r.instrument = std::string(trim(get("instrument_type")));
  if (!is_missing(get("collision_energy")))
    r.collision_energy = parse_double(get("collision_energy"));
  if (!is_missing(get("fold"))) {
    const auto split = parse_split(trim(get("fold")));
    if (!split)
      throw Skip { SkipReason::kBadSplit, "unknown fold '" + std::string(get("fold")) + "'" };
    r.split = *split;
  }
  return r;
}

// Maps a header cell to its canonical column name, if any.
std::optional<std::pair<std::string_view, int>> resolve_column(std::string_view name) {
  const std::string l = lower(trim(name));
  for (const ColumnAliases &c: column_aliases()) {
    for (std::size_t p = 0; p < c.aliases.size(); ++p) {
      if (l == c.aliases[p])
        return std::make_pair(c.canonical, static_cast<int>(p));
    }
  }
  return std::nullopt;
}

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto end = line.find('\t', pos);
    out.push_back(line.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
    if (end == std::string::npos)
      break;
    pos = end + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
    out.back().pop_back();
  return out;
}

class Loader {
public:
  Loader(const std::filesystem::path &path, std::optional<Split> filter)
      : filter_(filter) {
    ds_.report.path = path.string();
  }

  void accept(const Fields &fields, int line_no) {
    ++ds_.report.rows_read;
    try {
      SpectrumRecord r = build_record(fields, line_no);
      ++ds_.report.per_split[r.split];
      if (filter_ && r.split != *filter_) {
        ++ds_.report.filtered;
        return;
      }
      ds_.records.push_back(std::move(r));
    } catch (const Skip &s) {
      skip(line_no, s);
    }
  }

  void skip(int line_no, const Skip &s) {
    ++ds_.report.skipped;
    ++ds_.report.skip_counts[s.reason];
    if (ds_.report.skip_examples.size() < LoadReport::kMaxExamples) {
      ds_.report.skip_examples.push_back("line " + std::to_string(line_no) + ": "
                                         + std::string(to_string(s.reason)) + ": " + s.detail);
    }
  }

  Dataset finish() {
    ds_.report.records = static_cast<int>(ds_.records.size());
    if (ds_.report.rows_read - ds_.report.skipped == 0)
      throw DatasetError(DatasetErrorKind::kNoValidRows,
                         ds_.report.path + ": no valid rows (" + std::to_string(ds_.report.rows_read)
                             + " read)");
    return std::move(ds_);
  }

  LoadReport &report() { return ds_.report; }

private:
  std::optional<Split> filter_;
  Dataset ds_;
};

void load_tsv(std::istream &in, Loader &loader) {
  std::string line;
  int line_no = 0;
  // Skip leading blank lines; an otherwise empty file has no rows at all.
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty())
      break;
    line.clear();
  }
  if (trim(line).empty())
    return;

  const std::vector<std::string> header = split_tabs(line);
  // column index per canonical name, keeping the highest-priority alias
  std::map<std::string_view, std::pair<int, int>> columns;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    const auto hit = resolve_column(header[c]);
    if (!hit)
      continue;
    auto it = columns.find(hit->first);
    if (it == columns.end() || hit->second < it->second.second)
      columns[hit->first] = { c, hit->second };
  }
  for (const char *required: { "mzs", "intensities", "smiles", "precursor_formula" }) {
    if (!columns.count(required))
      throw DatasetError(DatasetErrorKind::kHeaderMissing,
                         loader.report().path + ": header lacks a '" + required + "' column");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const std::vector<std::string> cells = split_tabs(line);
    if (cells.size() != header.size()) {
      ++loader.report().rows_read;
      loader.skip(line_no, { SkipReason::kMalformedRow,
                             std::to_string(cells.size()) + " cells, header has "
                                 + std::to_string(header.size()) });
      continue;
    }
    Fields f;
    for (const auto &[name, col]: columns)
      f.emplace(std::string(name), cells[col.first]);
    loader.accept(f, line_no);
  }
}

std::string json_field(const Json &v) {
  if (v.is_null())
    return {};
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const Json &e: v) {
      if (!e.is_number())
        throw Skip { SkipReason::kBadNumber, "non-numeric list element" };
      if (!out.empty())
        out += ' ';
      out += e.dump();
    }
    return out;
  }
  return v.dump();
}

void load_jsonl(std::istream &in, Loader &loader) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    try {
      const Json obj = Json::parse(line);
      if (!obj.is_object())
        throw Skip { SkipReason::kMalformedRow, "not an object" };
      Fields f;
      std::map<std::string_view, int> priority;
      for (const auto &[key, value]: obj.items()) {
        const auto hit = resolve_column(key);
        if (!hit)
          continue;
        auto it = priority.find(hit->first);
        if (it != priority.end() && it->second <= hit->second)
          continue;
        priority[hit->first] = hit->second;
        f[std::string(hit->first)] = json_field(value);
      }
      loader.accept(f, line_no);
    } catch (const Json::exception &e) {
      ++loader.report().rows_read;
      loader.skip(line_no, { SkipReason::kMalformedRow, e.what() });
    } catch (const Skip &s) {
      ++loader.report().rows_read;
      loader.skip(line_no, s);
    }
  }
}

} // namespace

std::string_view to_string(Split split) {
  switch (split) {
  case Split::kTrain: return "train";
  case Split::kVal: return "val";
  case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view text) {
  const std::string l = lower(trim(text));
  if (l == "train")
    return Split::kTrain;
  if (l == "val" || l == "valid" || l == "validation")
    return Split::kVal;
  if (l == "test")
    return Split::kTest;
  return std::nullopt;
}

std::string_view to_string(WeightBin bin) {
  switch (bin) {
  case WeightBin::k0To200: return "[0,200)";
  case WeightBin::k200To400: return "[200,400)";
  case WeightBin::k400To600: return "[400,600)";
  case WeightBin::k600To800: return "[600,800)";
  case WeightBin::k800Up: return "[800,inf)";
  }
  return "?";
}

WeightBin weight_bin_for_mass(double mass) {
  if (!(mass >= 0) || !std::isfinite(mass))
    throw std::domain_error("mass must be finite and non-negative");
  if (mass < 200)
    return WeightBin::k0To200;
  if (mass < 400)
    return WeightBin::k200To400;
  if (mass < 600)
    return WeightBin::k400To600;
  if (mass < 800)
    return WeightBin::k600To800;
  return WeightBin::k800Up;
}

WeightBin weight_bin(const SpectrumRecord &record) {
  const chem::Molecule mol = chem::molecule_from_smiles(record.ground_truth);
  return weight_bin_for_mass(chem::monoisotopic_mass(chem::molecular_formula(mol)));
}

std::string_view to_string(DatasetErrorKind kind) {
  switch (kind) {
  case DatasetErrorKind::kFileUnreadable: return "FileUnreadable";
  case DatasetErrorKind::kHeaderMissing: return "HeaderMissing";
  case DatasetErrorKind::kNoValidRows: return "NoValidRows";
  case DatasetErrorKind::kAllZeroIntensities: return "AllZeroIntensities";
  }
  return "?";
}

DatasetError::DatasetError(DatasetErrorKind kind, const std::string &detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) { }

std::string_view to_string(SkipReason reason) {
  switch (reason) {
  case SkipReason::kMissingField: return "MissingField";
  case SkipReason::kBadNumber: return "BadNumber";
  case SkipReason::kEmptyPeaks: return "EmptyPeaks";
  case SkipReason::kLengthMismatch: return "LengthMismatch";
  case SkipReason::kNonPositiveMz: return "NonPositiveMz";
  case SkipReason::kNegativeIntensity: return "NegativeIntensity";
  case SkipReason::kAllZeroIntensities: return "AllZeroIntensities";
  case SkipReason::kBadFormula: return "BadFormula";
  case SkipReason::kBadGroundTruth: return "BadGroundTruth";
  case SkipReason::kBadSplit: return "BadSplit";
  case SkipReason::kMalformedRow: return "MalformedRow";
  }
  return "?";
}

std::string LoadReport::to_text() const {
  std::ostringstream out;
  out << "path: " << path << '\n'
      << "format: " << format << '\n'
      << "rows_read: " << rows_read << '\n'
      << "records: " << records << '\n'
      << "filtered_by_split: " << filtered << '\n'
      << "skipped: " << skipped << '\n';
  for (const Split s: { Split::kTrain, Split::kVal, Split::kTest }) {
    auto it = per_split.find(s);
    out << "valid_" << to_string(s) << ": " << (it == per_split.end() ? 0 : it->second) << '\n';
  }
  for (const auto &[reason, n]: skip_counts)
    out << "skip_" << to_string(reason) << ": " << n << '\n';
  for (const std::string &e: skip_examples)
    out << "skip_example: " << e << '\n';
  return out.str();
}

Dataset load_dataset(const std::filesystem::path &path, std::optional<Split> split_filter) {
  std::ifstream in(path, std::ios::binary);
  std::error_code ec;
  if (!in || std::filesystem::is_directory(path, ec))
    throw DatasetError(DatasetErrorKind::kFileUnreadable, path.string());
  const std::string ext = lower(path.extension().string());
  const bool jsonl = ext == ".jsonl" || ext == ".ndjson" || ext == ".json";
  Loader loader(path, split_filter);
  loader.report().format = jsonl ? "jsonl" : "tsv";
  if (jsonl)
    load_jsonl(in, loader);
  else
    load_tsv(in, loader);
  return loader.finish();
}

std::vector<double> normalize_intensities(std::span<const double> raw) {
  double max = 0;
  for (const double v: raw) {
    if (!std::isfinite(v) || v < 0)
      throw std::invalid_argument("intensities must be finite and non-negative");
    max = std::max(max, v);
  }
  if (!(max > 0))
    throw DatasetError(DatasetErrorKind::kAllZeroIntensities, "maximum intensity is zero");
  std::vector<double> out;
  out.reserve(raw.size());
  for (const double v: raw)
    out.push_back(v / max);
  return out;
}

const std::vector<ColumnAliases> &column_aliases() {
  // Aliases in priority order: when a file has several, the earliest wins.
  static const std::vector<ColumnAliases> table = {
    { "id", { "id", "identifier", "spectrum_id" } },
    { "mzs", { "mzs", "peaks_mz", "mz" } },
    { "intensities", { "intensities", "peaks_intensity", "intensity" } },
    { "smiles", { "smiles", "ground_truth", "ground_truth_smiles" } },
    { "precursor_formula", { "formula", "precursor_formula", "molecular_formula" } },
    { "adduct", { "adduct", "precursor_type" } },
    { "instrument_type", { "instrument_type", "instrument" } },
    { "collision_energy", { "collision_energy", "ce" } },
    { "fold", { "fold", "split" } },
  };
  return table;
}

} // namespace msbench::data
