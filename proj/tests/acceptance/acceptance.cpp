// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "forgebench/distortion.hpp"
#include "forgebench/grid.hpp"
#include "forgebench/harness.hpp"
#include "forgebench/metrics.hpp"
#include "forgebench/operation.hpp"
#include "forgebench/sdaug.hpp"
#include "forgebench/video.hpp"
#include "../synthetic.hpp"

namespace fb = forgebench;
namespace sd = forgebench::sdaug;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int g_failures = 0;

void check(const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("threw ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = out.ok && in_time;
  if (!pass) ++g_failures;
  std::printf("%s %-28s %7.2fs (limit %.0fs)%s%s%s\n", pass ? "PASS" : "FAIL", name, secs, budget_s,
              out.detail.empty() ? "" : "  ", out.detail.c_str(), in_time ? "" : "  [over time]");
  std::fflush(stdout);
}

fb::AucCell cell(const char* cat, const char* sev, std::size_t e, double auc) {
  fb::AucCell c;
  c.op_category = cat;
  c.severity_label = sev;
  c.entry_index = e;
  c.auc = auc;
  c.n_real = c.n_fake = 1;
  c.reliable = true;
  return c;
}

Outcome avg_columns() {
  const std::vector<fb::AucCell> cells = {
      cell("jpeg", "q95", 1, 0.9791),         cell("jpeg", "q60", 2, 0.7648),
      cell("jpeg", "q30", 3, 0.5960),         cell("gaussian_blur", "k3", 4, 0.6719),
      cell("gaussian_blur", "k7", 5, 0.5822), cell("gaussian_blur", "k11", 6, 0.5226),
      cell("gamma", "g0.1", 7, 0.5050),       cell("gamma", "g0.75", 8, 0.9886),
      cell("gamma", "g1.3", 9, 0.9917),       cell("gamma", "g2.5", 10, 0.9612),
  };
  const auto r = fb::aggregate(cells);
  const auto j = fb::format_percent(r.category_averages.at("jpeg"));
  const auto b = fb::format_percent(r.category_averages.at("gaussian_blur"));
  const auto g = fb::format_percent(r.category_averages.at("gamma"));
  return {j == "78.00" && b == "59.22" && g == "86.16", "jpeg " + j + " blur " + b + " gamma " + g};
}

// Independent pair count in integer half-units.
double brute_auc(const std::vector<double>& r, const std::vector<double>& f) {
  long long half = 0;
  for (double x : f)
    for (double y : r) half += x > y ? 2 : (x == y ? 1 : 0);
  return static_cast<double>(half) / (2.0 * static_cast<double>(r.size() * f.size()));
}

std::vector<double> draw_scores(fb::Rng64& rng, std::size_t n, std::uint64_t levels) {
  std::vector<double> v(n);
  for (auto& x : v) x = levels ? static_cast<double>(rng.next_below(levels)) / static_cast<double>(levels) : rng.next_uniform();
  return v;
}

Outcome auc_oracle() {
  fb::Rng64 rng(2001);
  int mismatches = 0, with_ties = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto levels = i % 4 == 0 ? 0 : 1 + rng.next_below(12);
    const auto r = draw_scores(rng, 1 + rng.next_below(50), levels);
    const auto f = draw_scores(rng, 1 + rng.next_below(50), levels);
    with_ties += levels != 0;
    if (fb::auc(r, f) != brute_auc(r, f)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches, " + std::to_string(with_ties) + " tied instances"};
}

Outcome auc_monotone() {
  fb::Rng64 rng(2002);
  double worst = 0.0;
  for (int set = 0; set < 100; ++set) {
    const auto r = draw_scores(rng, 2 + rng.next_below(49), 0);
    const auto f = draw_scores(rng, 2 + rng.next_below(49), 0);
    const double base = fb::auc(r, f);
    for (int m = 0; m < 20; ++m) {
      const double a = 0.1 + 10.0 * rng.next_uniform();
      const double b = 20.0 * rng.next_uniform() - 10.0;
      const double p = 0.25 + 3.75 * rng.next_uniform();
      const int shape = m % 4;
      auto g = [&](double x) {
        switch (shape) {
          case 0: return a * x + b;
          case 1: return a * std::pow(x, p) + b;
          case 2: return std::exp(p * x) - b;
          default: return std::atan(a * (x - 0.5)) + b;
        }
      };
      std::vector<double> gr(r), gf(f);
      for (auto& x : gr) x = g(x);
      for (auto& x : gf) x = g(x);
      worst = std::max(worst, std::abs(fb::auc(gr, gf) - base));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max |dAUC| %.3g", worst);
  return {worst <= 1e-12, buf};
}

Outcome identities() {
  int broken = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    fb::Rng64 shape(s);
    const auto img = fbtest::random_image(8 + shape.next_below(60), 8 + shape.next_below(60), 9000 + s);
    const fb::Rng64 rng(s);
    const bool all = fb::gaussian_noise(img, 0.0, rng) == img && fb::gamma_correct(img, 1.0) == img &&
                     fb::linear_enhance(img, fb::EnhanceMode::brightness, 0.0) == img &&
                     fb::linear_enhance(img, fb::EnhanceMode::contrast, 1.0) == img &&
                     fb::gaussian_blur(img, 1) == img && fb::box_blur(img, 1) == img &&
                     fb::compose(img, {}, rng) == img && sd::apply_chain(img, sd::ChainPlan{}, rng) == img;
    broken += !all;
  }
  return {broken == 0, std::to_string(broken) + " of 50 images changed"};
}

Outcome noise_calibration() {
  const auto img = fbtest::constant_image(512, 512, 128);
  std::string detail;
  bool ok = true;
  for (double sigma : {5.0, 10.0, 30.0}) {
    const fb::Rng64 rng(77);
    const auto out = fb::gaussian_noise(img, sigma, rng);
    // pre-clip field: the stream's normals scaled by sigma
    double s2 = 0.0, o2 = 0.0;
    const std::size_t n = img.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double z = sigma * rng.normal_at(i);
      s2 += z * z;
      const double d = out.data()[i] - 128.0;
      o2 += d * d;
    }
    const double pre = std::sqrt(s2 / n), post = std::sqrt(o2 / n);
    ok = ok && std::abs(pre - sigma) <= 0.05 * sigma && std::abs(post - sigma) <= 0.05 * sigma;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%ssigma %.0f: pre %.3f out %.3f", detail.empty() ? "" : "; ", sigma, pre, post);
    detail += buf;
  }
  return {ok, detail};
}

Outcome sdaug_statistics() {
  const sd::Config cfg;
  const fb::Rng64 root(5150);
  const int n = 100000;
  sd::StageCounts c;
  bool in_range = true;
  for (int i = 0; i < n; ++i) {
    fb::Rng64 rng = root.derive("sdaug/" + std::to_string(i));
    const auto plan = sd::sample_chain(cfg, rng);
    if (plan.enhance) {
      ++c.enhance;
      in_range = in_range && plan.enhance->factor >= 0.5 && plan.enhance->factor <= 1.5;
    }
    if (plan.blur) {
      ++c.blur;
      in_range = in_range && plan.blur->k >= 3 && plan.blur->k <= 15 && plan.blur->k % 2 == 1;
    }
    if (plan.noise) {
      ++c.noise;
      in_range = in_range && plan.noise->sigma >= 0.0 && plan.noise->sigma <= 50.0;
    }
    if (plan.jpeg) {
      ++c.jpeg;
      in_range = in_range && plan.jpeg->quality >= 10 && plan.jpeg->quality <= 95;
    }
  }
  const double fe = c.enhance / double(n), fbl = c.blur / double(n), fn = c.noise / double(n), fj = c.jpeg / double(n);
  const bool freq = std::abs(fe - 0.5) <= 0.01 && std::abs(fbl - 0.5) <= 0.01 && std::abs(fn - 0.3) <= 0.01 &&
                    std::abs(fj - 0.7) <= 0.01;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "freq %.4f/%.4f/%.4f/%.4f%s", fe, fbl, fn, fj, in_range ? "" : " params out of range");
  return {freq && in_range, buf};
}

std::string stub_cmd(const std::string& mode) { return fbtest::stub_adapter() + " --mode " + mode; }

Outcome end_to_end() {
  fb::TempDir dir("accept-e2e");
  const auto manifest = fb::load_manifest(fbtest::synthetic_dataset(dir.path(), 20, 32));
  fb::RunConfig cfg;
  cfg.grid = fb::load_grid(std::string(FB_CONFIG_DIR) + "/grid_image.json");
  cfg.adapter_cmd = stub_cmd("checksum");
  cfg.seed = 0;
  std::vector<std::string> records, reports;
  fb::Report last;
  for (int workers : {1, 1, 4}) {
    cfg.workers = workers;
    const auto res = fb::run_sweep(manifest, cfg);
    records.push_back(fb::records_to_jsonl(res.meta, res.records));
    last = fb::build_report({res.meta, res.records});
    reports.push_back(fb::emit_report(last, fb::ReportFormat::json));
  }
  const bool same = records[0] == records[1] && records[0] == records[2] && reports[0] == reports[1] &&
                    reports[0] == reports[2];
  std::size_t outside = 0;
  double lo = 1.0, hi = 0.0;
  for (const auto& c : last.cells) {
    const double a = c.auc.value_or(-1.0);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    outside += !(a >= 0.35 && a <= 0.65);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s; %zu cells, %zu outside [0.35,0.65], range [%.3f, %.3f]",
                same ? "byte-identical" : "OUTPUTS DIFFER", last.cells.size(), outside, lo, hi);
  return {same && outside == 0, buf};
}

Outcome discriminating_detector() {
  fb::TempDir dir("accept-lum");
  std::vector<fb::ImageBuffer> images;
  std::vector<fb::Label> labels;
  fb::Rng64 rng(4242);
  for (int i = 0; i < 400; ++i) {
    const int base = 145 + static_cast<int>(rng.next_below(11));
    const bool fake = i % 2 == 1;
    images.push_back(fbtest::constant_image(8, 8, static_cast<std::uint8_t>(fake ? base - 40 : base)));
    labels.push_back(fake ? fb::Label::fake : fb::Label::real);
  }
  const auto manifest = fb::load_manifest(fbtest::write_dataset(dir.path(), images, labels));
  fb::RunConfig cfg;
  cfg.grid = fb::parse_grid(R"({"unaltered": true, "operations": [
    {"category": "gaussian_noise", "levels": [5, 10, 30, 50]}]})");
  cfg.adapter_cmd = stub_cmd("luminance:130:1");
  cfg.seed = 0;
  const auto res = fb::run_sweep(manifest, cfg);
  const auto report = fb::build_report({res.meta, res.records});
  std::vector<double> aucs;
  for (const auto& c : report.cells) aucs.push_back(c.auc.value_or(-1.0));
  bool ok = aucs.size() == 5 && aucs[0] >= 0.95;
  for (std::size_t i = 2; i < aucs.size(); ++i) ok = ok && aucs[i] <= aucs[i - 1];
  std::string detail = "unaltered/5/10/30/50:";
  for (double a : aucs) detail += " " + fb::format_percent(a);
  return {ok, detail};
}

double correlation(const fb::ImageBuffer& a, const fb::ImageBuffer& b, double center) {
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.data()[i] - center, y = b.data()[i] - center;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  return sab / std::sqrt(saa * sbb);
}

Outcome video_laws() {
  fb::VideoClip clip;
  for (int t = 0; t < 10; ++t) clip.frames.push_back(fbtest::random_image(48, 32, 300 + t));
  std::vector<std::string> broken;
  for (auto axis : {fb::FlipAxis::horizontal, fb::FlipAxis::vertical})
    if (fb::flip(fb::flip(clip, axis), axis) != clip) broken.push_back("flip");
  const auto gray = fb::grayscale(clip);
  if (fb::grayscale(gray) != gray) broken.push_back("grayscale");

  const auto sep = fb::vintage(clip);
  const auto bright = fb::brightness_video(clip, fb::BrightnessDirection::lighten, fb::kDefaultLightenAmount);
  const auto contrast = fb::contrast_video(clip, fb::kDefaultVideoContrast);
  const auto res = fb::resolution_reduce(clip, 2, fb::ResolutionMode::keep);
  const fb::Rng64 rng(31);
  const auto noisy = fb::temporal_noise(clip, 10, rng);
  bool commute = true;
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    const auto& f = clip.frames[t];
    commute = commute && gray.frames[t] == fb::grayscale_frame(f) && sep.frames[t] == fb::vintage_frame(f) &&
              bright.frames[t] == fb::scale_intensity(f, fb::kDefaultLightenAmount) &&
              contrast.frames[t] == fb::linear_enhance(f, fb::EnhanceMode::contrast, fb::kDefaultVideoContrast) &&
              res.frames[t] == fb::resize_cycle(f, 2) &&
              noisy.frames[t] == fb::gaussian_noise(f, 10, rng.derive("frame/" + std::to_string(t)));
  }
  if (!commute) broken.push_back("per-frame");

  fb::VideoClip flat;
  for (int t = 0; t < 10; ++t) flat.frames.push_back(fbtest::constant_image(64, 64, 128));
  const auto field = fb::temporal_noise(flat, 10, fb::Rng64(32));
  double worst = 0.0;
  for (std::size_t t = 0; t + 1 < field.frames.size(); ++t)
    worst = std::max(worst, std::abs(correlation(field.frames[t], field.frames[t + 1], 128.0)));
  if (worst >= 0.05) broken.push_back("decorrelation");

  std::string detail;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "max |rho| %.4f", worst);
  detail = buf;
  for (const auto& b : broken) detail += "; broken " + b;
  return {broken.empty(), detail};
}

}  // namespace

int main() {
  check("avg-column-arithmetic", 1, avg_columns);
  check("auc-oracle-equivalence", 10, auc_oracle);
  check("auc-monotone-invariance", 10, auc_monotone);
  check("operator-identities", 5, identities);
  check("noise-calibration", 10, noise_calibration);
  check("sdaug-statistics", 30, sdaug_statistics);
  check("end-to-end-determinism", 120, end_to_end);
  check("discriminating-detector", 120, discriminating_detector);
  check("video-laws", 30, video_laws);
  std::printf("%d failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
