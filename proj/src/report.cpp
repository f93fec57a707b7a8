#include <algorithm>
#include <cmath>
#include <cstdio>

#include "forgebench/error.hpp"
#include "forgebench/metrics.hpp"
#include "json.hpp"

namespace forgebench {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::string_view kReportSchema = "forgebench-report/1";

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> opt_from(const ojson& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string emit_json(const Report& r) {
  ojson j;
  j["schema"] = kReportSchema;
  j["meta"] = {{"tool_version", r.meta.tool_version},
               {"seed", r.meta.seed},
               {"grid_hash", r.meta.grid_hash},
               {"adapter_hello", r.meta.adapter_hello},
               {"auc_level", r.meta.auc_level}};
  j["cells"] = ojson::array();
  for (const auto& c : r.cells)
    j["cells"].push_back({{"category", c.op_category},
                          {"severity", c.severity_label},
                          {"entry_index", c.entry_index},
                          {"auc", opt(c.auc)},
                          {"n_real", c.n_real},
                          {"n_fake", c.n_fake},
                          {"n_failed", c.n_failed},
                          {"reliable", c.reliable}});
  j["category_averages"] = ojson::object();
  for (const auto& [k, v] : r.category_averages) j["category_averages"][k] = v;
  j["overall_average"] = opt(r.overall_average);
  j["overall_average_with_unaltered"] = opt(r.overall_average_with_unaltered);
  j["overall_category_mean"] = opt(r.overall_category_mean);
  j["unaltered_auc"] = opt(r.unaltered_auc);
  j["undefined_cells"] = r.undefined_cells;
  return j.dump(2) + "\n";
}

std::string emit_csv(const Report& r) {
  std::string out = "category,severity,auc,n_real,n_fake,reliable\n";
  for (const auto& c : r.cells) {
    out += csv_field(c.op_category) + "," + csv_field(c.severity_label) + "," +
           (c.auc ? format_percent(*c.auc) : std::string("NA")) + "," + std::to_string(c.n_real) + "," +
           std::to_string(c.n_fake) + "," + (c.reliable ? "true" : "false") + "\n";
  }
  return out;
}

std::string emit_plotdata(const Report& r) {
  ojson j;
  j["baseline"] = opt(r.unaltered_auc);
  ojson series = ojson::array();
  std::vector<std::string> order;
  for (const auto& c : r.cells) {
    if (c.op_category == kUnalteredCategory) continue;
    auto it = std::find(order.begin(), order.end(), c.op_category);
    std::size_t idx = it - order.begin();
    if (it == order.end()) {
      order.push_back(c.op_category);
      series.push_back({{"category", c.op_category}, {"points", ojson::array()}});
    }
    series[idx]["points"].push_back({{"severity", c.severity_label}, {"auc", opt(c.auc)}});
  }
  j["series"] = series;
  return j.dump(2) + "\n";
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "plotdata") return ReportFormat::plotdata;
  throw Error(ErrorCode::UnknownFormat, "report format must be json|csv|plotdata, got " + std::string(name));
}

std::string format_percent(double fraction) {
  const double v = std::floor(fraction * 10000.0 + 0.5 + 1e-9) / 100.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string emit_report(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return emit_json(report);
    case ReportFormat::csv: return emit_csv(report);
    case ReportFormat::plotdata: return emit_plotdata(report);
  }
  throw Error(ErrorCode::UnknownFormat, "unknown report format");
}

Report parse_report_json(std::string_view text) {
  try {
    const ojson j = ojson::parse(text);
    if (j.at("schema") != kReportSchema)
      throw Error(ErrorCode::ParseError, "not a " + std::string(kReportSchema) + " document");
    Report r;
    const auto& m = j.at("meta");
    r.meta.tool_version = m.at("tool_version").get<std::string>();
    r.meta.seed = m.at("seed").get<std::uint64_t>();
    r.meta.grid_hash = m.at("grid_hash").get<std::string>();
    r.meta.adapter_hello = m.at("adapter_hello").get<std::string>();
    r.meta.auc_level = m.at("auc_level").get<std::string>();
    for (const auto& c : j.at("cells")) {
      AucCell cell;
      cell.op_category = c.at("category").get<std::string>();
      cell.severity_label = c.at("severity").get<std::string>();
      cell.entry_index = c.at("entry_index").get<std::size_t>();
      cell.auc = opt_from(c, "auc");
      cell.n_real = c.at("n_real").get<std::size_t>();
      cell.n_fake = c.at("n_fake").get<std::size_t>();
      cell.n_failed = c.at("n_failed").get<std::size_t>();
      cell.reliable = c.at("reliable").get<bool>();
      r.cells.push_back(std::move(cell));
    }
    for (const auto& [k, v] : j.at("category_averages").items()) r.category_averages[k] = v.get<double>();
    r.overall_average = opt_from(j, "overall_average");
    r.overall_average_with_unaltered = opt_from(j, "overall_average_with_unaltered");
    r.overall_category_mean = opt_from(j, "overall_category_mean");
    r.unaltered_auc = opt_from(j, "unaltered_auc");
    r.undefined_cells = j.at("undefined_cells").get<std::vector<std::string>>();
    return r;
  } catch (const ojson::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
}

}  // namespace forgebench
