#include "forgebench/image.hpp"

#include <string>

#include "forgebench/error.hpp"

namespace forgebench {

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height,
                         std::uint8_t fill)
    : width_(width), height_(height),
      pixels_(width * height * kChannels, fill) {
  if (width == 0 || height == 0)
    throw Error(ErrorCode::InvalidImage, "zero image dimension");
}

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height,
                         std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0)
    throw Error(ErrorCode::InvalidImage, "zero image dimension");
  if (pixels_.size() != width * height * kChannels)
    throw Error(ErrorCode::InvalidImage,
                "pixel buffer holds " + std::to_string(pixels_.size()) +
                    " bytes, expected " +
                    std::to_string(width * height * kChannels));
}

void require_valid(const ImageBuffer& img) {
  if (img.empty()) throw Error(ErrorCode::InvalidImage, "empty image");
}

}  // namespace forgebench
