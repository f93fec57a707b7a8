// forgebench command line: sweep, augment, report.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "forgebench/error.hpp"
#include "forgebench/harness.hpp"
#include "forgebench/metrics.hpp"
#include "forgebench/sdaug.hpp"

namespace fb = forgebench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw fb::Error(fb::ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw fb::Error(fb::ErrorCode::IoError, "write failed: " + path.string());
}

struct SweepArgs {
  std::string manifest, grid, adapter, out, report, cache, clip_mode = "mean_frames";
  std::uint64_t seed = 0;
  int workers = 1;
  double timeout_s = 120.0;
  double plugin_timeout_s = 120.0;
  std::size_t clip_frames = fb::kDefaultClipFrames;
  int max_restarts = 2;
};

int run_sweep(const SweepArgs& a) {
  fb::RunConfig cfg;
  cfg.grid = fb::load_grid(a.grid);
  cfg.adapter_cmd = a.adapter;
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  if (!a.cache.empty()) cfg.cache_dir = a.cache;
  cfg.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout_s * 1000.0));
  cfg.plugin.timeout = std::chrono::milliseconds(static_cast<long long>(a.plugin_timeout_s * 1000.0));
  cfg.clip_mode = fb::parse_clip_mode(a.clip_mode);
  cfg.clip_frames = a.clip_frames;
  cfg.max_restarts = a.max_restarts;
  for (const auto& s : cfg.grid.skipped) std::cerr << "skipping " << s << ": no plugin command\n";

  const auto manifest = fb::load_manifest(a.manifest);
  const auto result = fb::run_sweep(manifest, cfg);
  write_text(a.out, fb::records_to_jsonl(result.meta, result.records));

  const auto report = fb::build_report({result.meta, result.records});
  std::filesystem::path report_path = a.report;
  if (report_path.empty()) {
    report_path = std::filesystem::path(a.out);
    report_path.replace_extension(".report.json");
  }
  write_text(report_path, fb::emit_report(report, fb::ReportFormat::json));

  std::size_t failed = 0;
  for (const auto& r : result.records) failed += r.failed();
  std::cerr << result.records.size() << " samples, " << failed << " failed, " << result.restarts
            << " adapter restarts; records " << a.out << ", report " << report_path.string() << "\n";
  for (const auto& c : report.cells)
    if (!c.reliable)
      std::cerr << "unreliable cell " << c.op_category << "/" << c.severity_label << " (" << c.n_failed
                << " failed)\n";
  return fb::has_failure_overflow(report) ? kExitPartial : kExitOk;
}

struct AugmentArgs {
  std::string manifest, out_dir;
  std::uint64_t seed = 0;
  int workers = 1;
  fb::sdaug::Config cfg;
};

int run_augment(const AugmentArgs& a) {
  const auto manifest = fb::load_manifest(a.manifest);
  const auto rep = fb::sdaug::augment_dataset(manifest, a.cfg, a.seed, a.out_dir, a.workers);
  const double n = rep.items ? static_cast<double>(rep.items) : 1.0;
  std::printf("augmented %zu samples\n", rep.items);
  std::printf("enhance %zu (%.3f)\nblur %zu (%.3f)\nnoise %zu (%.3f)\njpeg %zu (%.3f)\n", rep.stages.enhance,
              rep.stages.enhance / n, rep.stages.blur, rep.stages.blur / n, rep.stages.noise,
              rep.stages.noise / n, rep.stages.jpeg, rep.stages.jpeg / n);
  for (const auto& f : rep.failures) std::fprintf(stderr, "failed %s: %s\n", f.id.c_str(), f.reason.c_str());
  const double total = static_cast<double>(manifest.items.size());
  if (!rep.failures.empty() && rep.failures.size() > fb::kMaxFailureFraction * total) return kExitPartial;
  return kExitOk;
}

struct ReportArgs {
  std::string records, format = "json", out;
};

int run_report(const ReportArgs& a) {
  const auto format = fb::parse_report_format(a.format);
  const auto report = fb::build_report(fb::load_records(a.records));
  const auto text = fb::emit_report(report, format);
  if (a.out.empty() || a.out == "-")
    std::cout << text;
  else
    write_text(a.out, text);
  return fb::has_failure_overflow(report) ? kExitPartial : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness sweeps for forgery detectors"};
  app.set_version_flag("--version", std::string(fb::kToolVersion));
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "score a detector over a severity grid");
  s->add_option("--manifest", sweep.manifest, "dataset manifest (JSONL)")->required();
  s->add_option("--grid", sweep.grid, "severity grid (JSON)")->required();
  s->add_option("--adapter", sweep.adapter, "adapter command line")->required();
  s->add_option("--out", sweep.out, "records output (JSONL)")->required();
  s->add_option("--report", sweep.report, "report output (default <out>.report.json)");
  s->add_option("--seed", sweep.seed, "master seed");
  s->add_option("--workers", sweep.workers, "parallel workers")->check(CLI::PositiveNumber);
  s->add_option("--cache", sweep.cache, "distortion cache directory");
  s->add_option("--clip-mode", sweep.clip_mode, "mean_frames|adapter_clip");
  s->add_option("--clip-frames", sweep.clip_frames, "frames sampled per clip")->check(CLI::PositiveNumber);
  s->add_option("--timeout", sweep.timeout_s, "per-sample adapter timeout, seconds")->check(CLI::PositiveNumber);
  s->add_option("--plugin-timeout", sweep.plugin_timeout_s, "external operator timeout, seconds")
      ->check(CLI::PositiveNumber);
  s->add_option("--max-restarts", sweep.max_restarts, "adapter restarts allowed per session")
      ->check(CLI::NonNegativeNumber);

  AugmentArgs aug;
  auto* g = app.add_subcommand("augment", "write an augmented copy of a dataset");
  g->add_option("--manifest", aug.manifest, "dataset manifest (JSONL)")->required();
  g->add_option("--out-dir", aug.out_dir, "output directory")->required();
  g->add_option("--seed", aug.seed, "master seed");
  g->add_option("--workers", aug.workers, "parallel workers")->check(CLI::PositiveNumber);
  g->add_option("--p-enhance", aug.cfg.p_enhance, "enhance stage probability")->check(CLI::Range(0.0, 1.0));
  g->add_option("--p-blur", aug.cfg.p_blur, "blur stage probability")->check(CLI::Range(0.0, 1.0));
  g->add_option("--p-noise", aug.cfg.p_noise, "noise stage probability")->check(CLI::Range(0.0, 1.0));
  g->add_option("--p-jpeg", aug.cfg.p_jpeg, "jpeg stage probability")->check(CLI::Range(0.0, 1.0));

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "aggregate a records file");
  r->add_option("--records", rep.records, "records file (JSONL)")->required();
  r->add_option("--format", rep.format, "json|csv|plotdata");
  r->add_option("--out", rep.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*s) return run_sweep(sweep);
    if (*g) return run_augment(aug);
    if (*r) return run_report(rep);
  } catch (const fb::Error& e) {
    std::fprintf(stderr, "forgebench: %s\n", e.what());
    return kExitFatal;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "forgebench: %s\n", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}
