#include "forgebench/operation.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "forgebench/distortion.hpp"
#include "forgebench/error.hpp"

namespace forgebench {
namespace {

struct CategoryInfo {
  OpCategory category;
  std::string_view name;
  CategorySchema schema;
};

const std::vector<CategoryInfo>& catalog() {
  static const std::vector<CategoryInfo> kCatalog = {
      {OpCategory::unaltered, "unaltered", {}},
      {OpCategory::jpeg, "jpeg", {{"quality"}, {}, false}},
      {OpCategory::extern_codec, "extern_codec", {{}, {"command"}, true}},
      {OpCategory::gaussian_noise, "gaussian_noise", {{"sigma"}, {}, false}},
      {OpCategory::poisson_gaussian_noise, "poisson_gaussian_noise", {{"a", "b"}, {}, false}},
      {OpCategory::gaussian_blur, "gaussian_blur", {{"k"}, {}, false}},
      {OpCategory::dncnn_extern, "dncnn_extern", {{}, {"command"}, true}},
      {OpCategory::gamma, "gamma", {{"gamma"}, {}, false}},
      {OpCategory::linear_brightness, "linear_brightness", {{"beta"}, {}, false}},
      {OpCategory::linear_contrast, "linear_contrast", {{"alpha"}, {}, false}},
      {OpCategory::resize_cycle, "resize_cycle", {{"factor"}, {}, false}},
      {OpCategory::combo, "combo", {}},
      {OpCategory::video_transcode, "video_transcode", {{"crf"}, {"command"}, false}},
      {OpCategory::video_flip, "video_flip", {{}, {"axis"}, false}},
      {OpCategory::video_grayscale, "video_grayscale", {}},
      {OpCategory::video_vintage, "video_vintage", {}},
      {OpCategory::video_brightness, "video_brightness", {{"amount"}, {"direction"}, false}},
      {OpCategory::video_contrast, "video_contrast", {{"alpha"}, {}, false}},
      {OpCategory::video_noise, "video_noise", {{"sigma"}, {}, false}},
      {OpCategory::video_resolution, "video_resolution", {{"factor"}, {"mode"}, false}},
  };
  return kCatalog;
}

const CategoryInfo& info(OpCategory category) {
  for (const auto& c : catalog())
    if (c.category == category) return c;
  throw Error(ErrorCode::UnknownCategory, "unregistered category");
}

double number(const OperationSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end())
    throw Error(ErrorCode::InvalidOperation,
                std::string(to_string(spec.category)) + " needs param " + key);
  return it->second;
}

int integer(const OperationSpec& spec, const std::string& key) {
  const double v = number(spec, key);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw Error(ErrorCode::InvalidOperation,
                std::string(to_string(spec.category)) + " param " + key +
                    " must be an integer, got " + format_number(v));
  return static_cast<int>(v);
}

const std::string& option(const OperationSpec& spec, const std::string& key) {
  auto it = spec.options.find(key);
  if (it == spec.options.end())
    throw Error(ErrorCode::InvalidOperation,
                std::string(to_string(spec.category)) + " needs option " + key);
  return it->second;
}

FlipAxis parse_axis(const std::string& s) {
  if (s == "horizontal") return FlipAxis::horizontal;
  if (s == "vertical") return FlipAxis::vertical;
  throw Error(ErrorCode::InvalidOperation, "flip axis must be horizontal|vertical, got " + s);
}

BrightnessDirection parse_direction(const std::string& s) {
  if (s == "lighten") return BrightnessDirection::lighten;
  if (s == "darken") return BrightnessDirection::darken;
  throw Error(ErrorCode::InvalidOperation, "direction must be lighten|darken, got " + s);
}

ResolutionMode parse_mode(const std::string& s) {
  if (s == "keep") return ResolutionMode::keep;
  if (s == "stretch") return ResolutionMode::stretch;
  throw Error(ErrorCode::InvalidOperation, "resolution mode must be keep|stretch, got " + s);
}

std::map<std::string, std::string> plugin_vars(const OperationSpec& spec) {
  std::map<std::string, std::string> vars;
  for (const auto& [k, v] : spec.params) vars[k] = format_number(v);
  for (const auto& [k, v] : spec.options)
    if (k != "command") vars[k] = v;
  return vars;
}

VideoClip apply_video_category(const VideoClip& clip, const OperationSpec& spec,
                               const Rng64& rng, const OpContext& ctx) {
  switch (spec.category) {
    case OpCategory::video_transcode:
      return transcode(clip, integer(spec, "crf"), option(spec, "command"), ctx.plugin);
    case OpCategory::video_flip:
      return flip(clip, parse_axis(option(spec, "axis")));
    case OpCategory::video_grayscale:
      return grayscale(clip);
    case OpCategory::video_vintage:
      return vintage(clip);
    case OpCategory::video_brightness:
      return brightness_video(clip, parse_direction(option(spec, "direction")),
                              number(spec, "amount"));
    case OpCategory::video_contrast:
      return contrast_video(clip, number(spec, "alpha"));
    case OpCategory::video_noise:
      return temporal_noise(clip, number(spec, "sigma"), rng);
    case OpCategory::video_resolution:
      return resolution_reduce(clip, integer(spec, "factor"),
                               parse_mode(option(spec, "mode")));
    default:
      break;
  }
  throw Error(ErrorCode::InvalidOperation, "not a video category");
}

}  // namespace

std::string_view to_string(OpCategory category) noexcept {
  for (const auto& c : catalog())
    if (c.category == category) return c.name;
  return "unknown";
}

OpCategory parse_category(std::string_view name) {
  for (const auto& c : catalog())
    if (c.name == name) return c.category;
  throw Error(ErrorCode::UnknownCategory, "unknown category '" + std::string(name) + "'");
}

bool is_video_category(OpCategory category) noexcept {
  return to_string(category).starts_with("video_");
}

bool is_extern_category(OpCategory category) noexcept {
  return category == OpCategory::extern_codec || category == OpCategory::dncnn_extern ||
         category == OpCategory::video_transcode;
}

const CategorySchema& schema_for(OpCategory category) { return info(category).schema; }

OperationSpec OperationSpec::unaltered() {
  OperationSpec spec;
  spec.category = OpCategory::unaltered;
  spec.severity_label = "none";
  return spec;
}

void validate(const OperationSpec& spec) {
  const auto& schema = schema_for(spec.category);
  const std::string cat(to_string(spec.category));
  for (const auto& key : schema.numeric)
    if (!spec.params.contains(key))
      throw Error(ErrorCode::InvalidOperation, cat + " is missing param '" + key + "'");
  for (const auto& key : schema.options)
    if (!spec.options.contains(key))
      throw Error(ErrorCode::InvalidOperation, cat + " is missing option '" + key + "'");
  for (const auto& [key, value] : spec.params) {
    if (!std::isfinite(value))
      throw Error(ErrorCode::InvalidOperation, cat + " param '" + key + "' is not finite");
    if (!schema.free_form &&
        std::find(schema.numeric.begin(), schema.numeric.end(), key) == schema.numeric.end())
      throw Error(ErrorCode::InvalidOperation, cat + " has no param '" + key + "'");
  }
  for (const auto& [key, value] : spec.options) {
    if (!schema.free_form &&
        std::find(schema.options.begin(), schema.options.end(), key) == schema.options.end())
      throw Error(ErrorCode::InvalidOperation, cat + " has no option '" + key + "'");
  }
  if (spec.category != OpCategory::combo && !spec.steps.empty())
    throw Error(ErrorCode::InvalidOperation, cat + " cannot have steps");
  for (const auto& step : spec.steps) {
    if (step.category == OpCategory::combo || step.category == OpCategory::unaltered)
      throw Error(ErrorCode::InvalidOperation, "combo steps must be plain operations");
    validate(step);
  }
}

ImageBuffer apply_operation(const ImageBuffer& img, const OperationSpec& spec,
                            const Rng64& rng, const OpContext& ctx) {
  switch (spec.category) {
    case OpCategory::unaltered:
      return img;
    case OpCategory::jpeg:
      return jpeg_cycle(img, integer(spec, "quality"));
    case OpCategory::extern_codec:
    case OpCategory::dncnn_extern:
      return extern_transform(img, option(spec, "command"), plugin_vars(spec), ctx.plugin);
    case OpCategory::gaussian_noise:
      return gaussian_noise(img, number(spec, "sigma"), rng);
    case OpCategory::poisson_gaussian_noise:
      return poisson_gaussian_noise(img, number(spec, "a"), number(spec, "b"), rng);
    case OpCategory::gaussian_blur:
      return gaussian_blur(img, integer(spec, "k"));
    case OpCategory::gamma:
      return gamma_correct(img, number(spec, "gamma"));
    case OpCategory::linear_brightness:
      return linear_enhance(img, EnhanceMode::brightness, number(spec, "beta"));
    case OpCategory::linear_contrast:
      return linear_enhance(img, EnhanceMode::contrast, number(spec, "alpha"));
    case OpCategory::resize_cycle:
      return resize_cycle(img, integer(spec, "factor"));
    case OpCategory::combo:
      return compose(img, spec.steps, rng, ctx);
    default:
      break;
  }
  VideoClip single{{img}, 25.0};
  return apply_video_category(single, spec, rng, ctx).frames.front();
}

VideoClip apply_operation(const VideoClip& clip, const OperationSpec& spec,
                          const Rng64& rng, const OpContext& ctx) {
  require_valid(clip);
  if (spec.category == OpCategory::unaltered) return clip;
  if (is_video_category(spec.category)) return apply_video_category(clip, spec, rng, ctx);
  VideoClip out{{}, clip.frame_rate};
  out.frames.reserve(clip.frames.size());
  for (std::size_t t = 0; t < clip.frames.size(); ++t)
    out.frames.push_back(
        apply_operation(clip.frames[t], spec, rng.derive("frame/" + std::to_string(t)), ctx));
  return out;
}

ImageBuffer compose(const ImageBuffer& img, const std::vector<OperationSpec>& steps,
                    const Rng64& rng, const OpContext& ctx) {
  ImageBuffer cur = img;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      cur = apply_operation(cur, steps[i], rng.derive("step/" + std::to_string(i)), ctx);
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(i) + " (" +
                                std::string(to_string(steps[i].category)) + "): " + e.message());
    }
  }
  return cur;
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15)
    return std::to_string(static_cast<long long>(v));
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

}  // namespace forgebench
