#include <gtest/gtest.h>

#include "forgebench/metrics.hpp"
#include "forgebench/sdaug.hpp"
#include "support.hpp"

namespace fb = forgebench;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    manifest_ = fbtest::synthetic_dataset(dir_.path() / "data", 8, 32);
    grid_ = dir_.path() / "grid.json";
    fbtest::write_text(grid_, R"({"unaltered": true, "operations": [
      {"category": "jpeg", "levels": [60]}, {"category": "gaussian_noise", "levels": [10]}]})");
  }

  int sweep(const std::string& mode, const std::string& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> argv = {fbtest::cli_path(), "sweep", "--manifest", manifest_.string(),
                                     "--grid", grid_.string(), "--adapter",
                                     fbtest::stub_adapter() + " --mode " + mode, "--out", out, "--seed", "5"};
    argv.insert(argv.end(), extra.begin(), extra.end());
    return fbtest::run(argv, {}, dir_.path() / "err.txt");
  }

  fb::TempDir dir_{"cli"};
  std::filesystem::path manifest_, grid_;
};

TEST_F(CliTest, SweepWritesRecordsAndReport) {
  const auto out = (dir_.path() / "records.jsonl").string();
  ASSERT_EQ(sweep("checksum", out, {"--workers", "3"}), 0) << fbtest::read_text(dir_.path() / "err.txt");
  const auto records = fb::load_records(out);
  EXPECT_EQ(records.records.size(), 3u * 8u);
  EXPECT_EQ(records.meta.seed, 5u);
  const auto report_text = fbtest::read_text(dir_.path() / "records.report.json");
  EXPECT_EQ(fb::parse_report_json(report_text), fb::build_report(records));

  // report recomputed from the records equals the one sweep wrote
  const auto again = dir_.path() / "again.json";
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "report", "--records", out, "--out", again.string()}), 0);
  EXPECT_EQ(fbtest::read_text(again), report_text);

  // and a second sweep is byte-identical
  const auto out2 = (dir_.path() / "second.jsonl").string();
  ASSERT_EQ(sweep("checksum", out2, {"--workers", "1", "--report", (dir_.path() / "r2.json").string()}), 0);
  EXPECT_EQ(fbtest::read_text(out2), fbtest::read_text(out));
  EXPECT_EQ(fbtest::read_text(dir_.path() / "r2.json"), report_text);
}

TEST_F(CliTest, ReportFormats) {
  const auto out = (dir_.path() / "records.jsonl").string();
  ASSERT_EQ(sweep("constant:0.5", out), 0);
  const auto csv = dir_.path() / "r.csv";
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "report", "--records", out, "--format", "csv"}, csv), 0);
  EXPECT_EQ(fbtest::read_text(csv).rfind("category,severity,auc,n_real,n_fake,reliable\nunaltered,none,50.00,4,4,true\n", 0),
            0u);
  const auto plot = dir_.path() / "p.json";
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "report", "--records", out, "--format", "plotdata", "--out", plot.string()}), 0);
  const auto text = fbtest::read_text(plot);
  EXPECT_NE(text.find("\"category\": \"jpeg\""), std::string::npos);
  EXPECT_NE(text.find("\"category\": \"gaussian_noise\""), std::string::npos);
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "report", "--records", out, "--format", "xml"}), 1);
}

TEST_F(CliTest, EmptyRecordsGiveEmptyReport) {
  const auto empty = dir_.path() / "empty.jsonl";
  fbtest::write_text(empty, "");
  const auto out = dir_.path() / "out.json";
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "report", "--records", empty.string()}, out), 0);
  EXPECT_TRUE(fb::parse_report_json(fbtest::read_text(out)).cells.empty());
}

TEST_F(CliTest, ExitCodes) {
  const auto out = (dir_.path() / "r.jsonl").string();
  // every sample fails: partial results, exit 2
  EXPECT_EQ(sweep("error", out), 2);
  EXPECT_EQ(fb::load_records(out).records.size(), 24u);
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "report", "--records", out}), 2);
  // a crash-looping adapter aborts the run
  EXPECT_EQ(sweep("crashloop", (dir_.path() / "c.jsonl").string()), 1);
  EXPECT_NE(fbtest::read_text(dir_.path() / "err.txt").find("AdapterCrash"), std::string::npos);
  EXPECT_EQ(sweep("starterror", (dir_.path() / "s.jsonl").string()), 1);
  // configuration errors
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "sweep", "--manifest", manifest_.string()}), 1);
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "report", "--records", "/nonexistent.jsonl"}), 1);
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "bogus"}), 1);
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "--version"}), 0);
}

TEST_F(CliTest, Augment) {
  const auto out = dir_.path() / "aug";
  const auto stdout_path = dir_.path() / "aug.txt";
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "augment", "--manifest", manifest_.string(), "--out-dir", out.string(),
                         "--seed", "9", "--p-jpeg", "0", "--workers", "2"},
                        stdout_path),
            0);
  EXPECT_NE(fbtest::read_text(stdout_path).find("augmented 8 samples"), std::string::npos);
  EXPECT_NE(fbtest::read_text(stdout_path).find("jpeg 0 "), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(out / fb::sdaug::kPlanSidecar));
  EXPECT_TRUE(std::filesystem::exists(out / "img" / "item7.png"));
  EXPECT_EQ(fbtest::run({fbtest::cli_path(), "augment", "--manifest", manifest_.string(), "--out-dir", out.string(),
                         "--p-noise", "2"}),
            1);
}

}  // namespace
