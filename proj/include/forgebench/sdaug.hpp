#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forgebench/image.hpp"
#include "forgebench/rng.hpp"

namespace forgebench {

struct Manifest;

namespace sdaug {

enum class EnhanceKind { brightness, contrast };
enum class BlurKind { gaussian, average };

struct EnhanceStage {
  EnhanceKind kind = EnhanceKind::brightness;
  double factor = 1.0;
  friend bool operator==(const EnhanceStage&, const EnhanceStage&) = default;
};
struct BlurStage {
  BlurKind kind = BlurKind::gaussian;
  int k = 3;
  friend bool operator==(const BlurStage&, const BlurStage&) = default;
};
struct NoiseStage {
  double sigma = 0.0;
  friend bool operator==(const NoiseStage&, const NoiseStage&) = default;
};
struct JpegStage {
  int quality = 95;
  friend bool operator==(const JpegStage&, const JpegStage&) = default;
};

/// A fully sampled augmentation chain. Stages run in declaration order:
/// enhance, blur, noise, jpeg.
struct ChainPlan {
  std::optional<EnhanceStage> enhance;
  std::optional<BlurStage> blur;
  std::optional<NoiseStage> noise;
  std::optional<JpegStage> jpeg;
  friend bool operator==(const ChainPlan&, const ChainPlan&) = default;
};

struct Range {
  double lo;
  double hi;
};
struct IntRange {
  int lo;
  int hi;
};

struct Config {
  double p_enhance = 0.5;
  double p_blur = 0.5;
  double p_noise = 0.3;
  double p_jpeg = 0.7;
  Range enhance_factor{0.5, 1.5};
  IntRange blur_kernel{3, 15};  // odd sizes only
  Range noise_sigma{0.0, 50.0};
  IntRange jpeg_quality{10, 95};
};

/// InvalidConfig for probabilities outside [0, 1] or unordered/invalid
/// ranges (the blur range must contain an odd size >= 1, quality [1, 100]).
void validate(const Config& cfg);
/// InvalidConfig when a present stage parameter falls outside cfg's ranges.
void validate(const ChainPlan& plan, const Config& cfg = {});

/// Draws exactly ten words from rng, in this order, whether or not a stage
/// fires: enhance {include, kind, factor}, blur {include, kind, k},
/// noise {include, sigma}, jpeg {include, quality}. A stage fires when its
/// uniform is below its probability.
ChainPlan sample_chain(const Config& cfg, Rng64& rng);

/// Runs the plan. Noise draws from rng.derive("noise"). Stage failures are
/// rethrown with the stage name prefixed.
ImageBuffer apply_chain(const ImageBuffer& img, const ChainPlan& plan,
                        const Rng64& rng);

/// Sidecar line: {"id", "enhance", "blur", "noise", "jpeg"}, null for
/// skipped stages.
std::string to_json_line(const std::string& id, const ChainPlan& plan);
/// Inverse of to_json_line. ParseError on malformed input.
std::pair<std::string, ChainPlan> parse_json_line(std::string_view line);

struct StageCounts {
  std::size_t enhance = 0;
  std::size_t blur = 0;
  std::size_t noise = 0;
  std::size_t jpeg = 0;
  friend bool operator==(const StageCounts&, const StageCounts&) = default;
};

struct ItemFailure {
  std::string id;
  std::string reason;
};

struct AugmentReport {
  std::size_t items = 0;  // augmented samples (images plus clip frames)
  StageCounts stages;
  std::vector<ItemFailure> failures;
};

inline constexpr const char* kPlanSidecar = "sdaug_plans.jsonl";

/// For item id, stream root.derive("sdaug/<id>") samples the plan and drives
/// apply_chain; clip frame t uses "sdaug/<id>/<t>". Images are written as PNG
/// under out_dir mirroring the manifest-relative path; clips as frame
/// directories. The sidecar holds one JSON line per augmented sample in
/// manifest order. Per-item I/O failures are collected in the report.
AugmentReport augment_dataset(const Manifest& manifest, const Config& cfg,
                              std::uint64_t seed,
                              const std::filesystem::path& out_dir,
                              int workers = 1);

}  // namespace sdaug
}  // namespace forgebench
