#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "forgebench/image.hpp"

namespace forgebench {

enum class ImageFormat { png, jpeg };

/// JPEG output is always baseline sequential with 4:2:0 chroma subsampling
/// and the Annex K tables scaled by the libjpeg quality mapping.
struct CodecParams {
  ImageFormat format = ImageFormat::png;
  std::optional<int> jpeg_quality;

  static CodecParams png() { return {}; }
  static CodecParams jpeg(int quality) { return {ImageFormat::jpeg, quality}; }
};

/// Decodes PNG (8-bit gray, gray+alpha, palette, RGB, RGBA; alpha is
/// dropped) or JPEG (baseline or progressive; grayscale is expanded).
/// Throws MalformedStream for truncated or invalid data and
/// UnsupportedFormat for anything else (e.g. CMYK JPEG).
ImageBuffer decode_image(std::span<const std::uint8_t> bytes);

/// Deterministic: equal inputs produce byte-identical streams.
std::vector<std::uint8_t> encode_image(const ImageBuffer& img,
                                       const CodecParams& params);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

ImageBuffer read_image(const std::filesystem::path& path);
/// Always PNG.
void write_png(const std::filesystem::path& path, const ImageBuffer& img);

}  // namespace forgebench
