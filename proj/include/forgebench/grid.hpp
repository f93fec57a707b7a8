#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "forgebench/operation.hpp"

namespace forgebench {

struct SeverityGrid {
  std::vector<OperationSpec> entries;
  bool includes_unaltered = false;
  /// Categories dropped because their plugin command was left empty.
  std::vector<std::string> skipped;

  friend bool operator==(const SeverityGrid&, const SeverityGrid&) = default;
};

/// Grid documents (JSON, key order significant):
///
///   {
///     "schema": "forgebench-grid/1",
///     "unaltered": true,
///     "plugins": {"extern_codec": "cmd {in} {out} {quality}", ...},
///     "operations": [
///       {"category": "jpeg", "levels": [95, 60, 30]},
///       {"category": "linear_contrast", "levels": [{"alpha": 1.5, "label": "a1.5"}]},
///       {"category": "combo", "levels": [{"label": "gn10+gb7", "steps": [
///          {"category": "gaussian_noise", "sigma": 10},
///          {"category": "gaussian_blur", "k": 7}]}]}
///     ]
///   }
///
/// A scalar level binds the category's single required parameter (number or
/// option) and gets a default label such as "q95", "sigma5", "k3". Extern
/// categories take their command from "plugins" unless a level overrides it;
/// one with no command is skipped and listed in SeverityGrid::skipped.
///
/// Errors: ParseError for malformed JSON, UnknownCategory, InvalidOperation
/// for schema violations or duplicate severity labels.
SeverityGrid parse_grid(std::string_view json_text);
SeverityGrid load_grid(const std::filesystem::path& path);

/// Hex SHA-256 of the canonical JSON form of the grid entries.
std::string grid_hash(const SeverityGrid& grid);

/// Canonical JSON of one spec (used for hashing and cache keys).
std::string canonical_json(const OperationSpec& spec);

/// Default label for a scalar level, e.g. (jpeg, 95) -> "q95".
std::string default_label(OpCategory category, const std::string& value);

}  // namespace forgebench
