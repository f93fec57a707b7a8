#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "forgebench/metrics.hpp"
#include "support.hpp"

namespace fb = forgebench;
using fbtest::code_of;

namespace {

using V = std::vector<double>;

TEST(Auc, HandExamples) {
  EXPECT_EQ(fb::auc(V{0.1, 0.2}, V{0.8, 0.9}), 1.0);
  EXPECT_EQ(fb::auc(V{0.8, 0.9}, V{0.1, 0.2}), 0.0);
  EXPECT_EQ(fb::auc(V{0.5, 0.5}, V{0.5, 0.5}), 0.5);
  // pairs (f > r): 0.4>0.1, 0.4>0.3, 0.2>0.1; one loss 0.2<0.3 -> 3/4
  EXPECT_EQ(fb::auc(V{0.1, 0.3}, V{0.2, 0.4}), 0.75);
  // one tie counts half: (1 + 0.5) / 2
  EXPECT_EQ(fb::auc(V{0.3}, V{0.3, 0.9}), 0.75);
}

TEST(Auc, EmptyClassAndNan) {
  EXPECT_EQ(code_of([] { fb::auc(V{}, V{0.5}); }), fb::ErrorCode::EmptyClass);
  EXPECT_EQ(code_of([] { fb::auc(V{0.5}, V{}); }), fb::ErrorCode::EmptyClass);
  EXPECT_EQ(code_of([] { fb::auc_pairwise(V{}, V{0.5}); }), fb::ErrorCode::EmptyClass);
  EXPECT_EQ(code_of([] { fb::auc(V{std::nan("")}, V{0.5}); }), fb::ErrorCode::InvalidConfig);
}

TEST(Auc, RankMatchesPairCountingWithTies) {
  fb::Rng64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    V r(1 + rng.next_below(30)), f(1 + rng.next_below(30));
    const auto levels = 1 + rng.next_below(8);  // coarse levels force ties
    for (auto& v : r) v = static_cast<double>(rng.next_below(levels)) / levels;
    for (auto& v : f) v = static_cast<double>(rng.next_below(levels)) / levels;
    ASSERT_EQ(fb::auc(r, f), fb::auc_pairwise(r, f));
  }
}

TEST(Auc, InvariantUnderMonotoneMaps) {
  fb::Rng64 rng(8);
  V r(40), f(40);
  for (auto& v : r) v = rng.next_uniform();
  for (auto& v : f) v = rng.next_uniform();
  const double base = fb::auc(r, f);
  auto map = [](V v, auto g) {
    for (auto& x : v) x = g(x);
    return v;
  };
  auto cube = [](double x) { return x * x * x; };
  auto expm = [](double x) { return std::exp(3 * x) - 7; };
  EXPECT_EQ(fb::auc(map(r, cube), map(f, cube)), base);
  EXPECT_EQ(fb::auc(map(r, expm), map(f, expm)), base);
}

fb::ScoreRecord rec(std::string cat, std::string sev, std::size_t e, std::optional<double> s, fb::Label l) {
  return {"id", std::move(cat), std::move(sev), e, s, l, s ? "" : "score: boom"};
}

TEST(GroupCells, CountsAndOrdering) {
  const auto R = fb::Label::real, F = fb::Label::fake;
  std::vector<fb::ScoreRecord> recs = {
      rec("jpeg", "q60", 1, 0.9, F), rec("unaltered", "none", 0, 0.2, R), rec("jpeg", "q60", 1, 0.1, R),
      rec("unaltered", "none", 0, 0.7, F), rec("jpeg", "q60", 1, std::nullopt, F),
  };
  const auto cells = fb::group_cells(recs);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].op_category, "unaltered");
  EXPECT_EQ(cells[1].n_real, 1u);
  EXPECT_EQ(cells[1].n_fake, 1u);
  EXPECT_EQ(cells[1].n_failed, 1u);
  EXPECT_EQ(cells[1].auc, 1.0);
  EXPECT_FALSE(cells[1].reliable);  // 1 of 3 failed
  EXPECT_TRUE(cells[0].reliable);
  std::reverse(recs.begin(), recs.end());
  EXPECT_EQ(fb::group_cells(recs), cells);
}

TEST(GroupCells, SingleClassCellIsUndefined) {
  std::vector<fb::ScoreRecord> recs = {rec("gamma", "g2.5", 3, 0.4, fb::Label::real)};
  const auto cells = fb::group_cells(recs);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_FALSE(cells[0].auc.has_value());
  EXPECT_FALSE(cells[0].reliable);
}

fb::AucCell cell(std::string cat, std::string sev, std::size_t e, std::optional<double> auc) {
  fb::AucCell c;
  c.op_category = std::move(cat);
  c.severity_label = std::move(sev);
  c.entry_index = e;
  c.auc = auc;
  c.n_real = c.n_fake = 10;
  c.reliable = auc.has_value();
  return c;
}

TEST(Aggregate, AveragesAndUndefinedCells) {
  const std::vector<fb::AucCell> cells = {
      cell("unaltered", "none", 0, 0.9), cell("jpeg", "q95", 1, 0.8), cell("jpeg", "q30", 2, 0.6),
      cell("gamma", "g2.5", 3, 0.5), cell("gamma", "g0.1", 4, std::nullopt),
  };
  const auto r = fb::aggregate(cells);
  EXPECT_NEAR(r.category_averages.at("jpeg"), 0.7, 1e-15);
  EXPECT_EQ(r.category_averages.at("gamma"), 0.5);
  EXPECT_FALSE(r.category_averages.contains("unaltered"));
  EXPECT_NEAR(*r.overall_average, (0.8 + 0.6 + 0.5) / 3, 1e-15);
  EXPECT_NEAR(*r.overall_average_with_unaltered, (0.9 + 0.8 + 0.6 + 0.5) / 4, 1e-15);
  EXPECT_NEAR(*r.overall_category_mean, 0.6, 1e-15);
  EXPECT_EQ(r.unaltered_auc, 0.9);
  EXPECT_EQ(r.undefined_cells, std::vector<std::string>{"gamma/g0.1"});
  auto shuffled = cells;
  std::rotate(shuffled.begin(), shuffled.begin() + 2, shuffled.end());
  EXPECT_EQ(fb::aggregate(shuffled), r);
}

TEST(Aggregate, CategoryAverageColumns) {
  const std::vector<fb::AucCell> cells = {
      cell("jpeg", "q95", 1, 0.9791),          cell("jpeg", "q60", 2, 0.7648),
      cell("jpeg", "q30", 3, 0.5960),          cell("gaussian_blur", "k3", 4, 0.6719),
      cell("gaussian_blur", "k7", 5, 0.5822),  cell("gaussian_blur", "k11", 6, 0.5226),
      cell("gamma", "g0.1", 7, 0.5050),        cell("gamma", "g0.75", 8, 0.9886),
      cell("gamma", "g1.3", 9, 0.9917),        cell("gamma", "g2.5", 10, 0.9612),
  };
  const auto r = fb::aggregate(cells);
  EXPECT_EQ(fb::format_percent(r.category_averages.at("jpeg")), "78.00");
  EXPECT_EQ(fb::format_percent(r.category_averages.at("gaussian_blur")), "59.22");
  EXPECT_EQ(fb::format_percent(r.category_averages.at("gamma")), "86.16");
}

TEST(Aggregate, EmptyInput) {
  const auto r = fb::aggregate({});
  EXPECT_TRUE(r.cells.empty());
  EXPECT_FALSE(r.overall_average.has_value());
  EXPECT_FALSE(r.unaltered_auc.has_value());
}

TEST(FormatPercent, HalfUp) {
  EXPECT_EQ(fb::format_percent(0.779966), "78.00");
  EXPECT_EQ(fb::format_percent(0.5), "50.00");
  EXPECT_EQ(fb::format_percent(0.12345), "12.35");
  EXPECT_EQ(fb::format_percent(1.0), "100.00");
  EXPECT_EQ(fb::format_percent(0.0), "0.00");
}

fb::RecordsFile sample_records() {
  fb::RecordsFile f;
  f.meta = {"0.1.0", 3, std::string(64, 'b'), R"({"type":"hello"})", "image"};
  const auto R = fb::Label::real, F = fb::Label::fake;
  f.records = {rec("unaltered", "none", 0, 0.2, R), rec("unaltered", "none", 0, 0.8, F),
               rec("jpeg", "q95", 1, 0.3, R),       rec("jpeg", "q95", 1, 0.3, F),
               rec("jpeg", "q30", 2, 0.6, R),       rec("jpeg", "q30", 2, 0.1, F)};
  return f;
}

TEST(Report, JsonRoundTrip) {
  const auto r = fb::build_report(sample_records());
  EXPECT_EQ(r.meta, sample_records().meta);
  const auto text = fb::emit_report(r, fb::ReportFormat::json);
  EXPECT_EQ(fb::parse_report_json(text), r);
  EXPECT_NE(text.find("\"schema\": \"forgebench-report/1\""), std::string::npos);
  EXPECT_EQ(code_of([] { fb::parse_report_json("{}"); }), fb::ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { fb::parse_report_json(R"({"schema":"other"})"); }), fb::ErrorCode::ParseError);
}

TEST(Report, Csv) {
  const auto csv = fb::emit_report(fb::build_report(sample_records()), fb::ReportFormat::csv);
  EXPECT_EQ(csv,
            "category,severity,auc,n_real,n_fake,reliable\n"
            "unaltered,none,100.00,1,1,true\n"
            "jpeg,q95,50.00,1,1,true\n"
            "jpeg,q30,0.00,1,1,true\n");
}

TEST(Report, CsvQuotesAndNa) {
  fb::Report r;
  r.cells.push_back(cell("combo", "a,b", 1, std::nullopt));
  EXPECT_EQ(fb::emit_report(r, fb::ReportFormat::csv),
            "category,severity,auc,n_real,n_fake,reliable\ncombo,\"a,b\",NA,10,10,false\n");
}

TEST(Report, PlotdataHasOneSeriesPerCategory) {
  auto f = sample_records();
  f.records.push_back(rec("gamma", "g2.5", 3, 0.4, fb::Label::real));
  f.records.push_back(rec("gamma", "g2.5", 3, 0.5, fb::Label::fake));
  const auto text = fb::emit_report(fb::build_report(f), fb::ReportFormat::plotdata);
  EXPECT_NE(text.find("\"baseline\": 1.0"), std::string::npos) << text;
  std::size_t series = 0;
  for (std::size_t p = text.find("\"category\""); p != std::string::npos; p = text.find("\"category\"", p + 1)) ++series;
  EXPECT_EQ(series, 2u);
}

TEST(Report, FailureOverflowAndFormats) {
  auto f = sample_records();
  EXPECT_FALSE(fb::has_failure_overflow(fb::build_report(f)));
  f.records.push_back(rec("jpeg", "q30", 2, std::nullopt, fb::Label::fake));
  EXPECT_TRUE(fb::has_failure_overflow(fb::build_report(f)));
  EXPECT_EQ(fb::parse_report_format("plotdata"), fb::ReportFormat::plotdata);
  EXPECT_EQ(code_of([] { fb::parse_report_format("xml"); }), fb::ErrorCode::UnknownFormat);
}

TEST(Report, EmptyRecords) {
  const auto r = fb::build_report(fb::parse_records(""));
  EXPECT_TRUE(r.cells.empty());
  EXPECT_EQ(fb::emit_report(r, fb::ReportFormat::csv), "category,severity,auc,n_real,n_fake,reliable\n");
}

}  // namespace
