#include "forgebench/codec.hpp"

#include <png.h>
// jpeglib.h needs size_t and FILE declared first.
#include <cstdio>
#include <cstdlib>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <jpeglib.h>
#include <string>

#include "forgebench/error.hpp"

namespace forgebench {
namespace {

bool is_png(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1A, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

bool is_jpeg(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 &&
         bytes[2] == 0xFF;
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::MalformedStream, "png: " + msg);
  }
  // Read as RGBA and drop alpha so stored color values pass through
  // unchanged instead of being composited.
  image.format = PNG_FORMAT_RGBA;
  const std::size_t w = image.width;
  const std::size_t h = image.height;
  if (w == 0 || h == 0) {
    png_image_free(&image);
    throw Error(ErrorCode::MalformedStream, "png: zero dimension");
  }
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::MalformedStream, "png: " + msg);
  }
  std::vector<std::uint8_t> rgb(w * h * 3);
  for (std::size_t i = 0, n = w * h; i < n; ++i) {
    rgb[3 * i + 0] = rgba[4 * i + 0];
    rgb[3 * i + 1] = rgba[4 * i + 1];
    rgb[3 * i + 2] = rgba[4 * i + 2];
  }
  return ImageBuffer(w, h, std::move(rgb));
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data().data(),
                                 0, nullptr)) {
    throw Error(ErrorCode::IoError, std::string("png: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0,
                                 img.data().data(), 0, nullptr)) {
    throw Error(ErrorCode::IoError, std::string("png: ") + image.message);
  }
  out.resize(size);
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

extern "C" void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

extern "C" void jpeg_emit_message(j_common_ptr cinfo, int level) {
  // Warnings (level -1) include premature end of data; count them so a
  // truncated stream is rejected instead of silently padded.
  if (level < 0) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    if (err->pub.num_warnings == 0)
      (*cinfo->err->format_message)(cinfo, err->message);
    err->pub.num_warnings++;
  }
}

// Kept free of objects with non-trivial destructors between setjmp and any
// longjmp back to it.
bool decode_jpeg_raw(std::span<const std::uint8_t> bytes,
                     std::vector<std::uint8_t>& pixels, std::size_t& width,
                     std::size_t& height, char* message, bool& unsupported) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  err.pub.emit_message = jpeg_emit_message;
  err.message[0] = '\0';
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
    std::strncpy(message, "CMYK/YCCK JPEG is not supported", JMSG_LENGTH_MAX);
    unsupported = true;
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  cinfo.out_color_space = JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.do_fancy_upsampling = TRUE;
  jpeg_start_decompress(&cinfo);
  width = cinfo.output_width;
  height = cinfo.output_height;
  pixels.resize(width * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + cinfo.output_scanline * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  const bool clean = err.pub.num_warnings == 0;
  if (!clean) std::strncpy(message, err.message, JMSG_LENGTH_MAX);
  jpeg_destroy_decompress(&cinfo);
  return clean;
}

ImageBuffer decode_jpeg(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> pixels;
  std::size_t width = 0;
  std::size_t height = 0;
  char message[JMSG_LENGTH_MAX] = {};
  bool unsupported = false;
  if (!decode_jpeg_raw(bytes, pixels, width, height, message, unsupported)) {
    throw Error(unsupported ? ErrorCode::UnsupportedFormat
                            : ErrorCode::MalformedStream,
                std::string("jpeg: ") + message);
  }
  if (width == 0 || height == 0)
    throw Error(ErrorCode::MalformedStream, "jpeg: zero dimension");
  return ImageBuffer(width, height, std::move(pixels));
}

bool encode_jpeg_raw(const ImageBuffer& img, int quality, unsigned char** out,
                     unsigned long* out_size, char* message) {
  jpeg_compress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  err.pub.emit_message = jpeg_emit_message;
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, out, out_size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  cinfo.comp_info[0].h_samp_factor = 2;
  cinfo.comp_info[0].v_samp_factor = 2;
  cinfo.comp_info[1].h_samp_factor = 1;
  cinfo.comp_info[1].v_samp_factor = 1;
  cinfo.comp_info[2].h_samp_factor = 1;
  cinfo.comp_info[2].v_samp_factor = 1;
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.optimize_coding = FALSE;
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = img.width() * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    // libjpeg takes non-const rows but does not write through them.
    JSAMPROW row = const_cast<JSAMPROW>(img.data().data() +
                                        cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality) {
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  char message[JMSG_LENGTH_MAX] = {};
  const bool ok = encode_jpeg_raw(img, quality, &buffer, &size, message);
  std::vector<std::uint8_t> out;
  if (ok) out.assign(buffer, buffer + size);
  std::free(buffer);
  if (!ok) throw Error(ErrorCode::IoError, std::string("jpeg: ") + message);
  return out;
}

}  // namespace

ImageBuffer decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4)
    throw Error(ErrorCode::MalformedStream, "stream too short");
  if (is_png(bytes)) return decode_png(bytes);
  if (is_jpeg(bytes)) return decode_jpeg(bytes);
  throw Error(ErrorCode::UnsupportedFormat, "neither PNG nor JPEG signature");
}

std::vector<std::uint8_t> encode_image(const ImageBuffer& img,
                                       const CodecParams& params) {
  require_valid(img);
  switch (params.format) {
    case ImageFormat::png:
      if (params.jpeg_quality)
        throw Error(ErrorCode::InvalidQuality, "quality given for PNG");
      return encode_png(img);
    case ImageFormat::jpeg: {
      if (!params.jpeg_quality)
        throw Error(ErrorCode::InvalidQuality, "JPEG needs a quality");
      const int q = *params.jpeg_quality;
      if (q < 1 || q > 100)
        throw Error(ErrorCode::InvalidQuality,
                    "quality " + std::to_string(q) + " outside [1, 100]");
      return encode_jpeg(img, q);
    }
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

ImageBuffer read_image(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_image(bytes);
}

void write_png(const std::filesystem::path& path, const ImageBuffer& img) {
  write_file_bytes(path, encode_image(img, CodecParams::png()));
}

}  // namespace forgebench
