#include "forgebench/sdaug.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>

#include "forgebench/codec.hpp"
#include "forgebench/distortion.hpp"
#include "forgebench/error.hpp"
#include "forgebench/manifest.hpp"
#include "forgebench/video.hpp"
#include "json.hpp"

namespace forgebench::sdaug {
namespace {

using nlohmann::json;

bool is_prob(double p) { return p >= 0.0 && p <= 1.0; }

int first_odd_at_least(int v) { return (v % 2 == 0) ? v + 1 : v; }

template <typename F>
ImageBuffer stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + " stage: " + e.message());
  }
}

std::string_view kind_name(EnhanceKind k) { return k == EnhanceKind::brightness ? "brightness" : "contrast"; }
std::string_view kind_name(BlurKind k) { return k == BlurKind::gaussian ? "gaussian" : "average"; }

std::filesystem::path mirrored_path(const ManifestItem& item, const std::filesystem::path& root) {
  std::filesystem::path rel;
  if (!root.empty()) rel = item.path.lexically_relative(root);
  if (rel.empty() || rel.is_absolute() || *rel.begin() == "..") rel = item.id;
  return rel;
}

struct ItemOutput {
  std::vector<std::string> lines;
  StageCounts stages;
  std::size_t samples = 0;
  std::string failure;
};

void count(StageCounts& c, const ChainPlan& plan) {
  c.enhance += plan.enhance.has_value();
  c.blur += plan.blur.has_value();
  c.noise += plan.noise.has_value();
  c.jpeg += plan.jpeg.has_value();
}

ItemOutput augment_item(const ManifestItem& item, const Config& cfg, const Rng64& root,
                        const std::filesystem::path& out_dir, const std::filesystem::path& manifest_root) {
  ItemOutput result;
  auto run = [&](const ImageBuffer& img, const std::string& label, const std::string& sample_id) {
    Rng64 rng = root.derive(label);
    const ChainPlan plan = sample_chain(cfg, rng);
    ImageBuffer out = apply_chain(img, plan, rng);
    result.lines.push_back(to_json_line(sample_id, plan));
    count(result.stages, plan);
    ++result.samples;
    return out;
  };
  try {
    const auto rel = mirrored_path(item, manifest_root);
    if (item.media == MediaKind::image) {
      const ImageBuffer img = read_image(item.path);
      auto target = out_dir / rel;
      target.replace_extension(".png");
      std::filesystem::create_directories(target.parent_path());
      write_png(target, run(img, "sdaug/" + item.id, item.id));
    } else {
      const VideoClip clip = read_clip(item.path);
      VideoClip out{{}, clip.frame_rate};
      for (std::size_t t = 0; t < clip.frames.size(); ++t) {
        const std::string suffix = "/" + std::to_string(t);
        out.frames.push_back(run(clip.frames[t], "sdaug/" + item.id + suffix, item.id + suffix));
      }
      write_clip(out_dir / rel, out);
    }
  } catch (const std::exception& e) {
    result = ItemOutput{};
    result.failure = e.what();
  }
  return result;
}

}  // namespace

void validate(const Config& cfg) {
  if (!is_prob(cfg.p_enhance) || !is_prob(cfg.p_blur) || !is_prob(cfg.p_noise) || !is_prob(cfg.p_jpeg))
    throw Error(ErrorCode::InvalidConfig, "stage probabilities must lie in [0, 1]");
  if (!(cfg.enhance_factor.lo > 0.0) || !(cfg.enhance_factor.lo <= cfg.enhance_factor.hi))
    throw Error(ErrorCode::InvalidConfig, "enhance factor range must satisfy 0 < lo <= hi");
  if (cfg.blur_kernel.lo < 1 || first_odd_at_least(cfg.blur_kernel.lo) > cfg.blur_kernel.hi)
    throw Error(ErrorCode::InvalidConfig, "blur kernel range must contain an odd size >= 1");
  if (!(cfg.noise_sigma.lo >= 0.0) || !(cfg.noise_sigma.lo <= cfg.noise_sigma.hi))
    throw Error(ErrorCode::InvalidConfig, "noise sigma range must satisfy 0 <= lo <= hi");
  if (cfg.jpeg_quality.lo < 1 || cfg.jpeg_quality.hi > 100 || cfg.jpeg_quality.lo > cfg.jpeg_quality.hi)
    throw Error(ErrorCode::InvalidConfig, "jpeg quality range must lie in [1, 100]");
}

void validate(const ChainPlan& plan, const Config& cfg) {
  if (plan.enhance &&
      !(plan.enhance->factor >= cfg.enhance_factor.lo && plan.enhance->factor <= cfg.enhance_factor.hi))
    throw Error(ErrorCode::InvalidConfig, "enhance factor out of range");
  if (plan.blur && (plan.blur->k < cfg.blur_kernel.lo || plan.blur->k > cfg.blur_kernel.hi || plan.blur->k % 2 == 0))
    throw Error(ErrorCode::InvalidConfig, "blur kernel out of range");
  if (plan.noise && !(plan.noise->sigma >= cfg.noise_sigma.lo && plan.noise->sigma <= cfg.noise_sigma.hi))
    throw Error(ErrorCode::InvalidConfig, "noise sigma out of range");
  if (plan.jpeg && (plan.jpeg->quality < cfg.jpeg_quality.lo || plan.jpeg->quality > cfg.jpeg_quality.hi))
    throw Error(ErrorCode::InvalidConfig, "jpeg quality out of range");
}

ChainPlan sample_chain(const Config& cfg, Rng64& rng) {
  validate(cfg);
  // Fixed draw order; every word is consumed even for skipped stages.
  const double enhance_on = rng.next_uniform();
  const double enhance_kind = rng.next_uniform();
  const double enhance_factor = rng.next_uniform();
  const double blur_on = rng.next_uniform();
  const double blur_kind = rng.next_uniform();
  const double blur_k = rng.next_uniform();
  const double noise_on = rng.next_uniform();
  const double noise_sigma = rng.next_uniform();
  const double jpeg_on = rng.next_uniform();
  const double jpeg_quality = rng.next_uniform();

  ChainPlan plan;
  if (enhance_on < cfg.p_enhance) {
    const auto& r = cfg.enhance_factor;
    plan.enhance = EnhanceStage{enhance_kind < 0.5 ? EnhanceKind::brightness : EnhanceKind::contrast,
                                r.lo + enhance_factor * (r.hi - r.lo)};
  }
  if (blur_on < cfg.p_blur) {
    const int lo = first_odd_at_least(cfg.blur_kernel.lo);
    const int sizes = (cfg.blur_kernel.hi - lo) / 2 + 1;
    const int pick = std::min(static_cast<int>(blur_k * sizes), sizes - 1);
    plan.blur = BlurStage{blur_kind < 0.5 ? BlurKind::gaussian : BlurKind::average, lo + 2 * pick};
  }
  if (noise_on < cfg.p_noise) {
    const auto& r = cfg.noise_sigma;
    plan.noise = NoiseStage{r.lo + noise_sigma * (r.hi - r.lo)};
  }
  if (jpeg_on < cfg.p_jpeg) {
    const auto& r = cfg.jpeg_quality;
    const int span = r.hi - r.lo + 1;
    plan.jpeg = JpegStage{r.lo + std::min(static_cast<int>(jpeg_quality * span), span - 1)};
  }
  return plan;
}

ImageBuffer apply_chain(const ImageBuffer& img, const ChainPlan& plan, const Rng64& rng) {
  require_valid(img);
  ImageBuffer cur = img;
  if (plan.enhance) {
    cur = stage("enhance", [&] {
      return plan.enhance->kind == EnhanceKind::brightness
                 ? scale_intensity(cur, plan.enhance->factor)
                 : linear_enhance(cur, EnhanceMode::contrast, plan.enhance->factor);
    });
  }
  if (plan.blur) {
    cur = stage("blur", [&] {
      return plan.blur->kind == BlurKind::gaussian ? gaussian_blur(cur, plan.blur->k)
                                                   : box_blur(cur, plan.blur->k);
    });
  }
  if (plan.noise) {
    cur = stage("noise", [&] { return gaussian_noise(cur, plan.noise->sigma, rng.derive("noise")); });
  }
  if (plan.jpeg) {
    cur = stage("jpeg", [&] { return jpeg_cycle(cur, plan.jpeg->quality); });
  }
  return cur;
}

std::string to_json_line(const std::string& id, const ChainPlan& plan) {
  json j;
  j["id"] = id;
  j["enhance"] = plan.enhance ? json{{"kind", kind_name(plan.enhance->kind)}, {"factor", plan.enhance->factor}}
                              : json(nullptr);
  j["blur"] = plan.blur ? json{{"kind", kind_name(plan.blur->kind)}, {"k", plan.blur->k}} : json(nullptr);
  j["noise"] = plan.noise ? json{{"sigma", plan.noise->sigma}} : json(nullptr);
  j["jpeg"] = plan.jpeg ? json{{"quality", plan.jpeg->quality}} : json(nullptr);
  return j.dump();
}

std::pair<std::string, ChainPlan> parse_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    ChainPlan plan;
    if (!j.at("enhance").is_null()) {
      const auto& e = j.at("enhance");
      const auto kind = e.at("kind").get<std::string>();
      if (kind != "brightness" && kind != "contrast") throw Error(ErrorCode::ParseError, "enhance kind " + kind);
      plan.enhance = EnhanceStage{kind == "brightness" ? EnhanceKind::brightness : EnhanceKind::contrast,
                                  e.at("factor").get<double>()};
    }
    if (!j.at("blur").is_null()) {
      const auto& b = j.at("blur");
      const auto kind = b.at("kind").get<std::string>();
      if (kind != "gaussian" && kind != "average") throw Error(ErrorCode::ParseError, "blur kind " + kind);
      plan.blur = BlurStage{kind == "gaussian" ? BlurKind::gaussian : BlurKind::average, b.at("k").get<int>()};
    }
    if (!j.at("noise").is_null()) plan.noise = NoiseStage{j.at("noise").at("sigma").get<double>()};
    if (!j.at("jpeg").is_null()) plan.jpeg = JpegStage{j.at("jpeg").at("quality").get<int>()};
    return {j.at("id").get<std::string>(), plan};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("plan line: ") + e.what());
  }
}

AugmentReport augment_dataset(const Manifest& manifest, const Config& cfg, std::uint64_t seed,
                              const std::filesystem::path& out_dir, int workers) {
  validate(cfg);
  if (workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be >= 1");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string());

  const Rng64 root(seed);
  std::vector<ItemOutput> outputs(manifest.items.size());
  const auto n = static_cast<std::ptrdiff_t>(manifest.items.size());
  // augment_item catches everything, so nothing escapes the parallel region.
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    outputs[i] = augment_item(manifest.items[i], cfg, root, out_dir, manifest.root);

  AugmentReport report;
  std::ofstream sidecar(out_dir / kPlanSidecar, std::ios::trunc);
  if (!sidecar) throw Error(ErrorCode::IoError, "cannot write " + (out_dir / kPlanSidecar).string());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& o = outputs[i];
    if (!o.failure.empty()) {
      report.failures.push_back({manifest.items[i].id, o.failure});
      continue;
    }
    for (const auto& line : o.lines) sidecar << line << '\n';
    report.items += o.samples;
    report.stages.enhance += o.stages.enhance;
    report.stages.blur += o.stages.blur;
    report.stages.noise += o.stages.noise;
    report.stages.jpeg += o.stages.jpeg;
  }
  if (!sidecar) throw Error(ErrorCode::IoError, "write failed: " + (out_dir / kPlanSidecar).string());
  return report;
}

}  // namespace forgebench::sdaug
