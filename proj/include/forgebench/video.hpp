#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "forgebench/extern_plugin.hpp"
#include "forgebench/image.hpp"
#include "forgebench/rng.hpp"

namespace forgebench {

struct VideoClip {
  std::vector<ImageBuffer> frames;
  double frame_rate = 25.0;

  std::size_t frame_count() const noexcept { return frames.size(); }
  friend bool operator==(const VideoClip&, const VideoClip&) = default;
};

/// InvalidImage when frames are empty or of differing dimensions, or the
/// frame rate is not positive.
void require_valid(const VideoClip& clip);

enum class FlipAxis { horizontal, vertical };
enum class BrightnessDirection { lighten, darken };
enum class ResolutionMode { keep, stretch };

inline constexpr double kDefaultLightenAmount = 1.3;
inline constexpr double kDefaultDarkenAmount = 0.7;
inline constexpr double kDefaultVideoContrast = 1.5;

// Single-frame versions; the clip ops map these over frames.
ImageBuffer flip_frame(const ImageBuffer& img, FlipAxis axis);
/// Y = round(0.299 R + 0.587 G + 0.114 B) into all three channels.
ImageBuffer grayscale_frame(const ImageBuffer& img);
/// Sepia matrix rows (0.393 0.769 0.189) (0.349 0.686 0.168)
/// (0.272 0.534 0.131), clipped.
ImageBuffer vintage_frame(const ImageBuffer& img);
ImageBuffer resolution_reduce_frame(const ImageBuffer& img, int factor,
                                    ResolutionMode mode);

VideoClip flip(const VideoClip& clip, FlipAxis axis);
VideoClip grayscale(const VideoClip& clip);
VideoClip vintage(const VideoClip& clip);
/// out = clip(round(in * amount)); direction only names the intent.
VideoClip brightness_video(const VideoClip& clip, BrightnessDirection direction,
                           double amount);
VideoClip contrast_video(const VideoClip& clip, double alpha);
/// Frame t gets gaussian_noise with stream rng.derive("frame/<t>").
VideoClip temporal_noise(const VideoClip& clip, double sigma,
                         const Rng64& rng);
/// keep: per-frame resize_cycle. stretch: height-only down and up.
VideoClip resolution_reduce(const VideoClip& clip, int factor,
                            ResolutionMode mode);

/// External H.264 round trip. The clip is written as a frame directory at
/// {in}; the transcoder must leave a frame directory with the same frame
/// count at {out}; {crf} is the rate factor. InvalidCrf outside [0, 51],
/// FrameCountMismatch, plus the extern_transform plugin errors.
VideoClip transcode(const VideoClip& clip, int crf,
                    std::string_view command_template,
                    const PluginOptions& options = {});

// Frame directory: <dir>/frames/%06d.png (from 000000) and <dir>/clip.json
// {"frame_rate": r, "frame_count": n}.
VideoClip read_clip(const std::filesystem::path& dir);
void write_clip(const std::filesystem::path& dir, const VideoClip& clip);

}  // namespace forgebench
