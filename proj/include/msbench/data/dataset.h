//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_DATA_DATASET_H_
#define MSBENCH_DATA_DATASET_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msbench/chem/formula.h"

namespace msbench::data {

enum class Split { kTrain, kVal, kTest };

std::string_view to_string(Split split);
/// Accepts "train", "val"/"validation"/"valid", "test" (any case).
std::optional<Split> parse_split(std::string_view text);

/// One benchmark instance. Peaks are sorted by m/z and intensities are
/// normalized so the largest is exactly 1.0.
struct SpectrumRecord {
  std::string id;
  std::vector<double> mzs;
  std::vector<double> intensities;
  chem::ElementCounts formula;
  std::string adduct;      // empty when unknown
  std::string instrument;  // empty when unknown
  std::optional<double> collision_energy;
  std::string ground_truth;
  Split split = Split::kTest;

  bool operator==(const SpectrumRecord &) const = default;
};

/// Molecular-weight bins: [0,200), [200,400), [400,600), [600,800), [800,inf).
enum class WeightBin { k0To200, k200To400, k400To600, k600To800, k800Up };

inline constexpr std::array<WeightBin, 5> kAllWeightBins = {
  WeightBin::k0To200, WeightBin::k200To400, WeightBin::k400To600,
  WeightBin::k600To800, WeightBin::k800Up,
};

std::string_view to_string(WeightBin bin);
/// Left-closed bins; negative and non-finite inputs throw std::domain_error.
WeightBin weight_bin_for_mass(double mass);
/// Bin of the monoisotopic mass of the ground-truth molecule's formula.
WeightBin weight_bin(const SpectrumRecord &record);

enum class DatasetErrorKind {
  kFileUnreadable,
  kHeaderMissing,
  kNoValidRows,
  kAllZeroIntensities,
};

std::string_view to_string(DatasetErrorKind kind);

class DatasetError: public std::runtime_error {
public:
  DatasetError(DatasetErrorKind kind, const std::string &detail);

  DatasetErrorKind kind() const { return kind_; }

private:
  DatasetErrorKind kind_;
};

enum class SkipReason {
  kMissingField,
  kBadNumber,
  kEmptyPeaks,
  kLengthMismatch,
  kNonPositiveMz,
  kNegativeIntensity,
  kAllZeroIntensities,
  kBadFormula,
  kBadGroundTruth,
  kBadSplit,
  kMalformedRow,
};

std::string_view to_string(SkipReason reason);

struct LoadReport {
  static constexpr std::size_t kMaxExamples = 10;

  std::string path;
  std::string format;  // "tsv" or "jsonl"
  int rows_read = 0;
  int records = 0;
  int filtered = 0;  // valid rows excluded by the split filter
  int skipped = 0;
  std::map<SkipReason, int> skip_counts;
  /// "line N: Reason: detail" for the first kMaxExamples skipped rows.
  std::vector<std::string> skip_examples;
  std::map<Split, int> per_split;

  /// Multi-line "key: value" summary.
  std::string to_text() const;
};

struct Dataset {
  std::vector<SpectrumRecord> records;
  LoadReport report;
};

/// Loads a tab-separated file with a header row, or one JSON object per line
/// when the extension is .jsonl / .ndjson / .json. Invalid rows are skipped
/// and tallied in the report. Throws DatasetError.
Dataset load_dataset(const std::filesystem::path &path,
                     std::optional<Split> split_filter = std::nullopt);

/// Divides every value by the maximum. Throws std::invalid_argument on a
/// negative or non-finite value and DatasetError kAllZeroIntensities when
/// the maximum is not positive.
std::vector<double> normalize_intensities(std::span<const double> raw);

/// Column name aliases, canonical name first.
struct ColumnAliases {
  std::string_view canonical;
  std::vector<std::string_view> aliases;
};
const std::vector<ColumnAliases> &column_aliases();

} // namespace msbench::data

#endif // MSBENCH_DATA_DATASET_H_
