#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forgebench/manifest.hpp"

namespace forgebench {

/// One scored (item, grid entry) pair. A failed sample keeps its slot with
/// no score and a reason, so gaps are never silent.
struct ScoreRecord {
  std::string item_id;
  std::string op_category;
  std::string severity_label;
  std::size_t entry_index = 0;  // position of the grid entry; orders cells
  std::optional<double> score;  // in [0, 1], higher = more fake
  Label label = Label::real;
  std::string failure;  // empty when scored

  bool failed() const noexcept { return !score.has_value(); }
  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

/// Provenance embedded in records and reports.
struct RunMetadata {
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string grid_hash;
  std::string adapter_hello;  // the adapter's hello line, verbatim JSON
  std::string auc_level;      // "image", "clip:mean_frames" or "clip:adapter_clip"
  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Records file: first line {"type":"run", ...metadata}, then one
/// {"type":"record", ...} line per ScoreRecord.
std::string records_to_jsonl(const RunMetadata& meta,
                             const std::vector<ScoreRecord>& records);
struct RecordsFile {
  RunMetadata meta;
  std::vector<ScoreRecord> records;
};
/// An empty text yields empty metadata and no records. ParseError with the
/// line number otherwise.
RecordsFile parse_records(std::string_view text);
RecordsFile load_records(const std::filesystem::path& path);

}  // namespace forgebench
