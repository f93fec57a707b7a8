#include "forgebench/video.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "forgebench/codec.hpp"
#include "forgebench/distortion.hpp"
#include "forgebench/error.hpp"
#include "forgebench/kernels.hpp"
#include "forgebench/operation.hpp"
#include "forgebench/process.hpp"
#include "json.hpp"

namespace forgebench {
namespace {

constexpr kernels::ColorMatrix kGrayMatrix = {0.299, 0.587, 0.114,  //
                                              0.299, 0.587, 0.114,  //
                                              0.299, 0.587, 0.114};
constexpr kernels::ColorMatrix kSepiaMatrix = {0.393, 0.769, 0.189,  //
                                               0.349, 0.686, 0.168,  //
                                               0.272, 0.534, 0.131};

// Frames are independent, so they are processed in parallel; the first
// exception (in frame order) is rethrown after the loop.
template <typename F>
VideoClip map_frames(const VideoClip& clip, F&& fn) {
  require_valid(clip);
  VideoClip out{std::vector<ImageBuffer>(clip.frames.size()), clip.frame_rate};
  std::vector<std::exception_ptr> errors(clip.frames.size());
  const auto n = static_cast<std::ptrdiff_t>(clip.frames.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    try {
      out.frames[t] = fn(clip.frames[t], static_cast<std::size_t>(t));
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string frame_name(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu.png", t);
  return buf;
}

}  // namespace

void require_valid(const VideoClip& clip) {
  if (clip.frames.empty()) throw Error(ErrorCode::InvalidImage, "clip has no frames");
  if (!(clip.frame_rate > 0.0))
    throw Error(ErrorCode::InvalidImage, "frame rate must be positive");
  const auto& first = clip.frames.front();
  require_valid(first);
  for (const auto& f : clip.frames)
    if (!f.same_shape(first))
      throw Error(ErrorCode::InvalidImage, "clip frames differ in size");
}

ImageBuffer flip_frame(const ImageBuffer& img, FlipAxis axis) {
  require_valid(img);
  ImageBuffer out(img.width(), img.height());
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  for (std::size_t y = 0; y < h; ++y) {
    if (axis == FlipAxis::vertical) {
      auto src = img.row(h - 1 - y);
      std::copy(src.begin(), src.end(), out.row(y).begin());
      continue;
    }
    for (std::size_t x = 0; x < w; ++x)
      for (std::size_t c = 0; c < 3; ++c) out.at(x, y, c) = img.at(w - 1 - x, y, c);
  }
  return out;
}

ImageBuffer grayscale_frame(const ImageBuffer& img) {
  require_valid(img);
  return kernels::parallel::apply_color_matrix(img, kGrayMatrix);
}

ImageBuffer vintage_frame(const ImageBuffer& img) {
  require_valid(img);
  return kernels::parallel::apply_color_matrix(img, kSepiaMatrix);
}

ImageBuffer resolution_reduce_frame(const ImageBuffer& img, int factor,
                                    ResolutionMode mode) {
  if (mode == ResolutionMode::keep) return resize_cycle(img, factor);
  require_valid(img);
  if (factor < 2)
    throw Error(ErrorCode::InvalidOperation, "resolution factor must be >= 2");
  const auto f = static_cast<std::size_t>(factor);
  if (img.width() < f || img.height() < f)
    throw Error(ErrorCode::ImageTooSmall, "frame smaller than factor " + std::to_string(factor));
  const std::size_t dh = (img.height() + f - 1) / f;
  const ImageBuffer squashed = resize_bicubic(img, img.width(), dh);
  return resize_bicubic(squashed, img.width(), img.height());
}

VideoClip flip(const VideoClip& clip, FlipAxis axis) {
  return map_frames(clip, [axis](const ImageBuffer& f, std::size_t) { return flip_frame(f, axis); });
}

VideoClip grayscale(const VideoClip& clip) {
  return map_frames(clip, [](const ImageBuffer& f, std::size_t) { return grayscale_frame(f); });
}

VideoClip vintage(const VideoClip& clip) {
  return map_frames(clip, [](const ImageBuffer& f, std::size_t) { return vintage_frame(f); });
}

VideoClip brightness_video(const VideoClip& clip, BrightnessDirection /*direction*/,
                           double amount) {
  if (!(amount > 0.0))
    throw Error(ErrorCode::NonPositiveAmount, "amount " + format_number(amount));
  return map_frames(clip,
                    [amount](const ImageBuffer& f, std::size_t) { return scale_intensity(f, amount); });
}

VideoClip contrast_video(const VideoClip& clip, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::NonPositiveAlpha, "alpha " + format_number(alpha));
  return map_frames(clip, [alpha](const ImageBuffer& f, std::size_t) {
    return linear_enhance(f, EnhanceMode::contrast, alpha);
  });
}

VideoClip temporal_noise(const VideoClip& clip, double sigma, const Rng64& rng) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::NegativeSigma, "sigma " + format_number(sigma));
  return map_frames(clip, [sigma, &rng](const ImageBuffer& f, std::size_t t) {
    return gaussian_noise(f, sigma, rng.derive("frame/" + std::to_string(t)));
  });
}

VideoClip resolution_reduce(const VideoClip& clip, int factor, ResolutionMode mode) {
  require_valid(clip);
  if (factor < 2) throw Error(ErrorCode::InvalidOperation, "resolution factor must be >= 2");
  const auto f = static_cast<std::size_t>(factor);
  const auto& first = clip.frames.front();
  if (first.width() < f || first.height() < f)
    throw Error(ErrorCode::ImageTooSmall, "frames smaller than factor " + std::to_string(factor));
  return map_frames(clip, [factor, mode](const ImageBuffer& fr, std::size_t) {
    return resolution_reduce_frame(fr, factor, mode);
  });
}

VideoClip transcode(const VideoClip& clip, int crf, std::string_view command_template,
                    const PluginOptions& options) {
  require_valid(clip);
  if (crf < 0 || crf > 51)
    throw Error(ErrorCode::InvalidCrf, "crf " + std::to_string(crf) + " outside [0, 51]");
  if (command_template.find("{in}") == std::string_view::npos ||
      command_template.find("{out}") == std::string_view::npos)
    throw Error(ErrorCode::InvalidOperation,
                "transcoder template needs {in} and {out}: " + std::string(command_template));

  TempDir tmp("forgebench-transcode");
  const auto in_dir = tmp.path() / "in";
  const auto out_dir = tmp.path() / "out";
  write_clip(in_dir, clip);
  const auto argv = expand_command(
      command_template,
      {{"in", in_dir.string()}, {"out", out_dir.string()}, {"crf", std::to_string(crf)}});
  const std::string cmdline = format_command(argv);
  const ProcessResult result = run_process(argv, options.timeout);
  if (result.timed_out)
    throw Error(ErrorCode::PluginTimeout,
                "no result after " + std::to_string(options.timeout.count()) + " ms: " + cmdline);
  if (result.exit_code != 0)
    throw Error(ErrorCode::PluginBadOutput,
                "exit status " + std::to_string(result.exit_code) + ": " + cmdline);

  VideoClip out;
  try {
    out = read_clip(out_dir);
  } catch (const Error& e) {
    throw Error(ErrorCode::PluginBadOutput, e.message() + " (from " + cmdline + ")");
  }
  if (out.frame_count() != clip.frame_count())
    throw Error(ErrorCode::FrameCountMismatch,
                "transcoder returned " + std::to_string(out.frame_count()) + " frames for " +
                    std::to_string(clip.frame_count()) + ": " + cmdline);
  if (!out.frames.front().same_shape(clip.frames.front()))
    throw Error(ErrorCode::DimensionMismatch, "transcoder changed frame size: " + cmdline);
  return out;
}

VideoClip read_clip(const std::filesystem::path& dir) {
  const auto meta_path = dir / "clip.json";
  std::ifstream in(meta_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + meta_path.string());
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedStream, meta_path.string() + ": " + e.what());
  }
  if (!meta.is_object() || !meta.contains("frame_rate") || !meta["frame_rate"].is_number())
    throw Error(ErrorCode::MalformedStream, meta_path.string() + ": missing frame_rate");
  VideoClip clip;
  clip.frame_rate = meta["frame_rate"].get<double>();
  std::size_t count = 0;
  if (meta.contains("frame_count") && meta["frame_count"].is_number_unsigned()) {
    count = meta["frame_count"].get<std::size_t>();
  } else {
    while (std::filesystem::exists(dir / "frames" / frame_name(count))) ++count;
  }
  clip.frames.reserve(count);
  for (std::size_t t = 0; t < count; ++t) clip.frames.push_back(read_image(dir / "frames" / frame_name(t)));
  require_valid(clip);
  return clip;
}

void write_clip(const std::filesystem::path& dir, const VideoClip& clip) {
  require_valid(clip);
  std::error_code ec;
  std::filesystem::create_directories(dir / "frames", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + (dir / "frames").string());
  for (std::size_t t = 0; t < clip.frames.size(); ++t)
    write_png(dir / "frames" / frame_name(t), clip.frames[t]);
  nlohmann::json meta = {{"frame_rate", clip.frame_rate}, {"frame_count", clip.frames.size()}};
  std::ofstream out(dir / "clip.json", std::ios::trunc);
  out << meta.dump() << "\n";
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / "clip.json").string());
}

}  // namespace forgebench
