#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forgebench/records.hpp"

namespace forgebench {

/// ROC-AUC via mid-ranks (O(n log n)). Computed in integer half-units so the
/// result is bit-identical to auc_pairwise. EmptyClass when either list is
/// empty.
double auc(std::span<const double> scores_real,
           std::span<const double> scores_fake);

/// Mann-Whitney pair counting, O(n*m): (#{f > r} + 0.5 #{f = r}) / (n*m).
double auc_pairwise(std::span<const double> scores_real,
                    std::span<const double> scores_fake);

/// A cell is unreliable when its AUC is undefined or more than this fraction
/// of its samples failed.
inline constexpr double kMaxFailureFraction = 0.05;

struct AucCell {
  std::string op_category;
  std::string severity_label;
  std::size_t entry_index = 0;
  std::optional<double> auc;
  std::size_t n_real = 0;
  std::size_t n_fake = 0;
  std::size_t n_failed = 0;
  bool reliable = false;
  friend bool operator==(const AucCell&, const AucCell&) = default;
};

/// One cell per (op_category, severity_label), ordered by
/// (entry_index, op_category, severity_label); failed records count toward
/// n_failed only. Independent of record order.
std::vector<AucCell> group_cells(std::span<const ScoreRecord> records);

inline constexpr std::string_view kUnalteredCategory = "unaltered";

struct Report {
  RunMetadata meta;
  std::vector<AucCell> cells;
  std::map<std::string, double> category_averages;  // distorted categories
  std::optional<double> overall_average;            // mean of distorted cells
  std::optional<double> overall_average_with_unaltered;
  std::optional<double> overall_category_mean;  // mean of category averages
  std::optional<double> unaltered_auc;
  std::vector<std::string> undefined_cells;  // "category/severity"
  friend bool operator==(const Report&, const Report&) = default;
};

/// Averages over cells with a defined AUC; undefined cells are listed and
/// excluded. Independent of cell order.
Report aggregate(std::span<const AucCell> cells, const RunMetadata& meta = {});

/// Records -> cells -> report.
Report build_report(const RecordsFile& records);

/// True when any cell is unreliable because of sample failures.
bool has_failure_overflow(const Report& report);

enum class ReportFormat { json, csv, plotdata };
/// UnknownFormat for anything else.
ReportFormat parse_report_format(std::string_view name);

/// Percent with two decimals, half-up: 0.779966 -> "78.00".
std::string format_percent(double fraction);

/// json: full report, schema "forgebench-report/1".
/// csv: category,severity,auc,n_real,n_fake,reliable (auc in percent).
/// plotdata: one (severity, auc) series per distorted category.
std::string emit_report(const Report& report, ReportFormat format);
/// Inverse of the json format. ParseError on malformed input.
Report parse_report_json(std::string_view text);

}  // namespace forgebench
