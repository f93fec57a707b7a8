#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace forgebench {

/// Owned 8-bit interleaved RGB raster, row-major.
class ImageBuffer {
 public:
  static constexpr std::size_t kChannels = 3;

  ImageBuffer() = default;
  ImageBuffer(std::size_t width, std::size_t height, std::uint8_t fill = 0);
  /// Throws InvalidImage when pixels.size() != width * height * 3 or a
  /// dimension is zero.
  ImageBuffer(std::size_t width, std::size_t height,
              std::vector<std::uint8_t> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  std::span<std::uint8_t> data() noexcept { return pixels_; }
  std::span<const std::uint8_t> data() const noexcept { return pixels_; }

  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) {
    return pixels_[(y * width_ + x) * kChannels + c];
  }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const {
    return pixels_[(y * width_ + x) * kChannels + c];
  }

  std::span<std::uint8_t> row(std::size_t y) noexcept {
    return std::span(pixels_).subspan(y * width_ * kChannels,
                                      width_ * kChannels);
  }
  std::span<const std::uint8_t> row(std::size_t y) const noexcept {
    return std::span(pixels_).subspan(y * width_ * kChannels,
                                      width_ * kChannels);
  }

  bool same_shape(const ImageBuffer& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Round half away from zero, then clip to [0, 255]. NaN maps to 0.
inline std::uint8_t clip_round(double v) noexcept {
  if (!(v > 0.0)) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(v));
}

/// Throws InvalidImage when img has no pixels.
void require_valid(const ImageBuffer& img);

}  // namespace forgebench
