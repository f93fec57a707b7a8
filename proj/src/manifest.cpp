#include "forgebench/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "forgebench/error.hpp"
#include "json.hpp"

namespace forgebench {
namespace {

using nlohmann::json;

std::string field(const json& j, const char* key, std::size_t line_no) {
  if (!j.contains(key) || !j[key].is_string())
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

}  // namespace

std::string_view to_string(Label label) noexcept { return label == Label::real ? "real" : "fake"; }

std::string_view to_string(MediaKind media) noexcept {
  return media == MediaKind::image ? "image" : "clip";
}

Label parse_label(std::string_view text) {
  if (text == "real") return Label::real;
  if (text == "fake") return Label::fake;
  throw Error(ErrorCode::UnknownLabel, "label '" + std::string(text) + "' is not real|fake");
}

Manifest parse_manifest(std::string_view text, const std::filesystem::path& root) {
  Manifest m;
  m.root = root;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (blank(line)) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object())
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected an object");

    ManifestItem item;
    item.id = field(j, "id", line_no);
    if (item.id.empty())
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty id");
    item.path = field(j, "path", line_no);
    if (item.path.is_relative() && !root.empty()) item.path = root / item.path;
    try {
      item.label = parse_label(field(j, "label", line_no));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnknownLabel) throw;
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.message());
    }
    if (j.contains("media")) {
      const auto media = field(j, "media", line_no);
      if (media == "image") {
        item.media = MediaKind::image;
      } else if (media == "clip") {
        item.media = MediaKind::clip;
      } else {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": media '" + media + "' is not image|clip");
      }
    }
    if (!seen.insert(item.id).second)
      throw Error(ErrorCode::DuplicateId, "line " + std::to_string(line_no) + ": id '" + item.id + "' repeats");
    m.items.push_back(std::move(item));
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

void save_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest " + path.string());
  const auto base = path.parent_path();
  for (const auto& item : manifest.items) {
    std::filesystem::path p = item.path;
    if (!base.empty() && p.is_absolute() == base.is_absolute()) {
      auto rel = p.lexically_relative(base);
      if (!rel.empty()) p = rel;
    }
    json j = {{"id", item.id}, {"path", p.generic_string()}, {"label", to_string(item.label)},
              {"media", to_string(item.media)}};
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace forgebench
