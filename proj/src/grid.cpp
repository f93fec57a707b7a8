#include "forgebench/grid.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "crypto.hpp"
#include "forgebench/error.hpp"
#include "json.hpp"

namespace forgebench {
namespace {

using ojson = nlohmann::ordered_json;

struct Plugin {
  std::string command;
  std::string param = "level";
};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidOperation, what); }

bool takes_plugin(OpCategory c) { return c == OpCategory::extern_codec || c == OpCategory::dncnn_extern; }

std::string strip_video(std::string_view name) {
  return std::string(name.starts_with("video_") ? name.substr(6) : name);
}

// Options a level may leave out.
void fill_defaults(OperationSpec& spec) {
  if (spec.category == OpCategory::video_resolution && !spec.options.contains("mode"))
    spec.options["mode"] = "keep";
  if (spec.category == OpCategory::video_brightness) {
    if (!spec.options.contains("direction") && spec.params.contains("amount"))
      spec.options["direction"] = spec.params["amount"] >= 1.0 ? "lighten" : "darken";
    if (!spec.params.contains("amount") && spec.options.contains("direction"))
      spec.params["amount"] = spec.options["direction"] == "darken" ? kDefaultDarkenAmount : kDefaultLightenAmount;
  }
}

// The key a scalar level binds, with whether it is numeric.
std::pair<std::string, bool> scalar_key(OpCategory c, const ojson& value,
                                        const std::map<std::string, Plugin>& plugins) {
  const std::string cat(to_string(c));
  if (takes_plugin(c)) {
    auto it = plugins.find(cat);
    return {it == plugins.end() ? "level" : it->second.param, value.is_number()};
  }
  if (c == OpCategory::video_brightness) return value.is_string() ? std::pair{"direction", false} : std::pair{"amount", true};
  const auto& schema = schema_for(c);
  if (schema.numeric.size() == 1) return {schema.numeric.front(), true};
  std::vector<std::string> opts;
  for (const auto& o : schema.options)
    if (o != "command") opts.push_back(o);
  if (schema.numeric.empty() && opts.size() == 1) return {opts.front(), false};
  bad(cat + " levels must be objects");
}

std::string render(const ojson& v) {
  return v.is_number() ? format_number(v.get<double>()) : v.get<std::string>();
}

void bind(OperationSpec& spec, const std::string& key, const ojson& v) {
  const std::string cat(to_string(spec.category));
  if (key == "command") {
    if (!v.is_string()) bad(cat + " command must be a string");
    spec.options[key] = v.get<std::string>();
  } else if (v.is_number()) {
    spec.params[key] = v.get<double>();
  } else if (v.is_string()) {
    spec.options[key] = v.get<std::string>();
  } else {
    bad(cat + " value for '" + key + "' must be a number or string");
  }
}

std::string auto_label(const OperationSpec& spec, bool explicit_options) {
  if (spec.category == OpCategory::combo) {
    std::string out;
    for (const auto& s : spec.steps) out += (out.empty() ? "" : "+") + s.severity_label;
    return out;
  }
  const auto& schema = schema_for(spec.category);
  if (spec.category == OpCategory::video_brightness)
    return spec.options.at("direction") + format_number(spec.params.at("amount"));
  if (schema.numeric.size() == 1 && spec.params.size() == 1 && !explicit_options)
    return default_label(spec.category, format_number(spec.params.begin()->second));
  std::string out;
  for (const auto& [k, v] : spec.params) out += (out.empty() ? "" : "_") + k + format_number(v);
  for (const auto& [k, v] : spec.options)
    if (k != "command") out += (out.empty() ? "" : "_") + v;
  return out.empty() ? strip_video(to_string(spec.category)) : out;
}

class GridParser {
 public:
  explicit GridParser(std::map<std::string, Plugin> plugins) : plugins_(std::move(plugins)) {}

  // Returns false when the spec needs a plugin command nobody supplied.
  bool level(OperationSpec& spec, const ojson& lv) {
    const std::string cat(to_string(spec.category));
    if (lv.is_object()) {
      for (const auto& [k, v] : lv.items()) {
        if (k == "label") {
          if (!v.is_string() || v.get<std::string>().empty()) bad(cat + " label must be a non-empty string");
          spec.severity_label = v.get<std::string>();
        } else if (k == "steps") {
          if (spec.category != OpCategory::combo) bad(cat + " cannot have steps");
          if (!v.is_array() || v.empty()) bad("combo steps must be a non-empty array");
          for (const auto& st : v) {
            if (!st.is_object() || !st.contains("category") || !st["category"].is_string())
              bad("combo step needs a category");
            OperationSpec step;
            step.category = parse_category(st["category"].get<std::string>());
            ojson rest = st;
            rest.erase("category");
            if (!level(step, rest)) return false;
            spec.steps.push_back(std::move(step));
          }
        } else {
          bind(spec, k, v);
        }
      }
      if (spec.category == OpCategory::combo && spec.steps.empty()) bad("combo needs steps");
    } else if (lv.is_number() || lv.is_string()) {
      if (spec.category == OpCategory::combo) bad("combo levels must be objects");
      const auto [key, numeric] = scalar_key(spec.category, lv, plugins_);
      if (numeric != lv.is_number())
        bad(cat + " level '" + lv.dump() + "' should be a " + (numeric ? "number" : "string"));
      bind(spec, key, lv);
    } else {
      bad(cat + " level must be a number, string or object");
    }

    if (is_extern_category(spec.category) && !spec.options.contains("command")) {
      auto it = plugins_.find(cat);
      if (it != plugins_.end()) spec.options["command"] = it->second.command;
    }
    if (is_extern_category(spec.category) && spec.options["command"].empty()) return false;
    const bool explicit_options =
        std::any_of(spec.options.begin(), spec.options.end(), [](const auto& kv) { return kv.first != "command"; });
    fill_defaults(spec);
    validate(spec);
    if (spec.severity_label.empty()) spec.severity_label = auto_label(spec, explicit_options);
    return true;
  }

 private:
  std::map<std::string, Plugin> plugins_;
};

std::map<std::string, Plugin> parse_plugins(const ojson& doc) {
  std::map<std::string, Plugin> plugins;
  if (!doc.contains("plugins")) return plugins;
  const auto& p = doc["plugins"];
  if (!p.is_object()) bad("plugins must be an object");
  for (const auto& [name, v] : p.items()) {
    const auto c = parse_category(name);
    if (!is_extern_category(c)) bad(name + " does not take a plugin");
    Plugin plugin;
    if (v.is_string()) {
      plugin.command = v.get<std::string>();
    } else if (v.is_object() && v.contains("command") && v["command"].is_string()) {
      plugin.command = v["command"].get<std::string>();
      if (v.contains("param")) {
        if (!v["param"].is_string() || v["param"].get<std::string>().empty())
          bad(name + " plugin param must be a non-empty string");
        plugin.param = v["param"].get<std::string>();
      }
    } else {
      bad(name + " plugin must be a command string or {command, param}");
    }
    plugins[name] = plugin;
  }
  return plugins;
}

ojson spec_to_json(const OperationSpec& spec) {
  ojson j;
  j["category"] = to_string(spec.category);
  j["label"] = spec.severity_label;
  j["params"] = ojson::object();
  for (const auto& [k, v] : spec.params) j["params"][k] = v;
  j["options"] = ojson::object();
  for (const auto& [k, v] : spec.options) j["options"][k] = v;
  if (!spec.steps.empty()) {
    j["steps"] = ojson::array();
    for (const auto& s : spec.steps) j["steps"].push_back(spec_to_json(s));
  }
  return j;
}

}  // namespace

std::string default_label(OpCategory category, const std::string& value) {
  switch (category) {
    case OpCategory::jpeg: return "q" + value;
    case OpCategory::gaussian_noise:
    case OpCategory::video_noise: return "sigma" + value;
    case OpCategory::gaussian_blur: return "k" + value;
    case OpCategory::gamma: return "g" + value;
    case OpCategory::linear_brightness:
      return "beta" + (value.starts_with('-') ? value : "+" + value);
    case OpCategory::linear_contrast:
    case OpCategory::video_contrast: return "alpha" + value;
    case OpCategory::resize_cycle:
    case OpCategory::video_resolution: return "x" + value;
    case OpCategory::video_transcode: return "crf" + value;
    default: return value;
  }
}

SeverityGrid parse_grid(std::string_view json_text) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const ojson::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("grid: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "grid must be a JSON object");
  if (doc.contains("schema") && doc["schema"] != "forgebench-grid/1")
    bad("unsupported grid schema " + doc["schema"].dump());

  SeverityGrid grid;
  if (doc.contains("unaltered")) {
    if (!doc["unaltered"].is_boolean()) bad("unaltered must be a boolean");
    grid.includes_unaltered = doc["unaltered"].get<bool>();
  }
  if (grid.includes_unaltered) grid.entries.push_back(OperationSpec::unaltered());

  GridParser parser(parse_plugins(doc));
  if (!doc.contains("operations") || !doc["operations"].is_array()) bad("grid needs an operations array");
  std::set<std::pair<std::string, std::string>> labels;
  for (const auto& op : doc["operations"]) {
    if (!op.is_object() || !op.contains("category") || !op["category"].is_string())
      bad("each operation needs a category");
    const auto name = op["category"].get<std::string>();
    const auto category = parse_category(name);
    if (category == OpCategory::unaltered) bad("use the top-level unaltered flag");

    ojson levels;
    if (op.contains("levels")) {
      levels = op["levels"];
      if (!levels.is_array() || levels.empty()) bad(name + " levels must be a non-empty array");
    } else if (schema_for(category).numeric.empty() && schema_for(category).options.empty()) {
      levels = ojson::array({ojson::object()});
    } else {
      bad(name + " needs levels");
    }

    for (const auto& lv : levels) {
      OperationSpec spec;
      spec.category = category;
      if (!parser.level(spec, lv)) {
        const std::string tag = category == OpCategory::combo ? "combo/" + (lv.is_object() && lv.contains("label") ? render(lv["label"]) : lv.dump()) : name;
        if (std::find(grid.skipped.begin(), grid.skipped.end(), tag) == grid.skipped.end())
          grid.skipped.push_back(tag);
        continue;
      }
      if (!labels.insert({name, spec.severity_label}).second)
        bad(name + " repeats severity label '" + spec.severity_label + "'");
      grid.entries.push_back(std::move(spec));
    }
  }
  if (grid.entries.empty()) bad("grid has no runnable entries");
  return grid;
}

SeverityGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open grid " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_grid(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

std::string canonical_json(const OperationSpec& spec) { return spec_to_json(spec).dump(); }

std::string grid_hash(const SeverityGrid& grid) {
  std::string text;
  for (const auto& e : grid.entries) text += canonical_json(e) + "\n";
  return detail::sha256_hex(text);
}

}  // namespace forgebench
