#include "forgebench/records.hpp"

#include <fstream>
#include <sstream>

#include "forgebench/error.hpp"
#include "json.hpp"

namespace forgebench {
namespace {

using ojson = nlohmann::ordered_json;

template <typename T>
T get(const ojson& j, const char* key, std::size_t line_no) {
  try {
    return j.at(key).get<T>();
  } catch (const ojson::exception&) {
    throw Error(ErrorCode::ParseError,
                "records line " + std::to_string(line_no) + ": bad or missing '" + key + "'");
  }
}

}  // namespace

std::string records_to_jsonl(const RunMetadata& meta, const std::vector<ScoreRecord>& records) {
  std::string out;
  ojson head = {{"type", "run"},
                {"tool_version", meta.tool_version},
                {"seed", meta.seed},
                {"grid_hash", meta.grid_hash},
                {"adapter_hello", meta.adapter_hello},
                {"auc_level", meta.auc_level}};
  out += head.dump() + "\n";
  for (const auto& r : records) {
    ojson j = {{"type", "record"},
               {"item_id", r.item_id},
               {"op_category", r.op_category},
               {"severity_label", r.severity_label},
               {"entry_index", r.entry_index},
               {"score", r.score ? ojson(*r.score) : ojson(nullptr)},
               {"label", to_string(r.label)},
               {"failure", r.failure}};
    out += j.dump() + "\n";
  }
  return out;
}

RecordsFile parse_records(std::string_view text) {
  RecordsFile file;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_meta = false;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const ojson::exception& e) {
      throw Error(ErrorCode::ParseError, "records line " + std::to_string(line_no) + ": " + e.what());
    }
    const auto type = get<std::string>(j, "type", line_no);
    if (type == "run") {
      if (have_meta || !file.records.empty())
        throw Error(ErrorCode::ParseError, "records line " + std::to_string(line_no) + ": unexpected run header");
      file.meta.tool_version = get<std::string>(j, "tool_version", line_no);
      file.meta.seed = get<std::uint64_t>(j, "seed", line_no);
      file.meta.grid_hash = get<std::string>(j, "grid_hash", line_no);
      file.meta.adapter_hello = get<std::string>(j, "adapter_hello", line_no);
      file.meta.auc_level = get<std::string>(j, "auc_level", line_no);
      have_meta = true;
    } else if (type == "record") {
      ScoreRecord r;
      r.item_id = get<std::string>(j, "item_id", line_no);
      r.op_category = get<std::string>(j, "op_category", line_no);
      r.severity_label = get<std::string>(j, "severity_label", line_no);
      r.entry_index = get<std::size_t>(j, "entry_index", line_no);
      if (!j.contains("score"))
        throw Error(ErrorCode::ParseError, "records line " + std::to_string(line_no) + ": missing 'score'");
      if (!j["score"].is_null()) r.score = get<double>(j, "score", line_no);
      try {
        r.label = parse_label(get<std::string>(j, "label", line_no));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnknownLabel) throw;
        throw Error(ErrorCode::ParseError, "records line " + std::to_string(line_no) + ": " + e.message());
      }
      r.failure = j.contains("failure") ? get<std::string>(j, "failure", line_no) : std::string();
      if (!r.score && r.failure.empty()) r.failure = "unscored";
      file.records.push_back(std::move(r));
    } else {
      throw Error(ErrorCode::ParseError, "records line " + std::to_string(line_no) + ": unknown type " + type);
    }
  }
  return file;
}

RecordsFile load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open records " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_records(ss.str());
}

}  // namespace forgebench
