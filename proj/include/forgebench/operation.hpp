#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forgebench/extern_plugin.hpp"
#include "forgebench/image.hpp"
#include "forgebench/rng.hpp"
#include "forgebench/video.hpp"

namespace forgebench {

enum class OpCategory {
  unaltered,
  jpeg,
  extern_codec,
  gaussian_noise,
  poisson_gaussian_noise,
  gaussian_blur,
  dncnn_extern,
  gamma,
  linear_brightness,
  linear_contrast,
  resize_cycle,
  combo,
  video_transcode,
  video_flip,
  video_grayscale,
  video_vintage,
  video_brightness,
  video_contrast,
  video_noise,
  video_resolution,
};

std::string_view to_string(OpCategory category) noexcept;
/// UnknownCategory for names outside the catalog.
OpCategory parse_category(std::string_view name);
bool is_video_category(OpCategory category) noexcept;
bool is_extern_category(OpCategory category) noexcept;

/// Parameter schema of one category: required numeric params, required
/// text options, and whether plugin-defined extra params are allowed.
struct CategorySchema {
  std::vector<std::string> numeric;
  std::vector<std::string> options;
  bool free_form = false;
};
const CategorySchema& schema_for(OpCategory category);

/// One (operation, severity) cell of a sweep grid.
struct OperationSpec {
  OpCategory category = OpCategory::unaltered;
  std::map<std::string, double> params;
  std::map<std::string, std::string> options;
  std::string severity_label;
  std::vector<OperationSpec> steps;  // combo only

  static OperationSpec unaltered();

  friend bool operator==(const OperationSpec&, const OperationSpec&) = default;
};

/// InvalidOperation when params/options do not match the schema, or a value
/// is non-finite. Does not check value ranges; the operators do.
void validate(const OperationSpec& spec);

struct OpContext {
  PluginOptions plugin;
};

/// Applies spec to an image. Video categories treat the image as a one-frame
/// clip. The unaltered category returns the input unchanged.
ImageBuffer apply_operation(const ImageBuffer& img, const OperationSpec& spec,
                            const Rng64& rng, const OpContext& ctx = {});

/// Applies spec to a clip. Image categories run frame by frame, frame t
/// drawing from rng.derive("frame/<t>").
VideoClip apply_operation(const VideoClip& clip, const OperationSpec& spec,
                          const Rng64& rng, const OpContext& ctx = {});

/// Left-to-right application; step i draws from rng.derive("step/<i>").
/// A failing step rethrows its error code with "step <i>" prefixed.
ImageBuffer compose(const ImageBuffer& img,
                    const std::vector<OperationSpec>& steps, const Rng64& rng,
                    const OpContext& ctx = {});

/// Canonical number rendering used for labels and plugin arguments:
/// integers without a decimal point, others shortest round-trip.
std::string format_number(double v);

}  // namespace forgebench
