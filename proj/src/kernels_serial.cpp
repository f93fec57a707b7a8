#include <cmath>

#include "forgebench/kernels.hpp"

namespace forgebench::kernels {

std::ptrdiff_t reflect101(std::ptrdiff_t i, std::ptrdiff_t n) noexcept {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0)
      i = -i;
    else
      i = 2 * (n - 1) - i;
  }
  return i;
}

double cubic_weight(double x) noexcept {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

namespace serial {

ImageBuffer convolve_separable(const ImageBuffer& src,
                               std::span<const double> taps) {
  const auto w = static_cast<std::ptrdiff_t>(src.width());
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  const auto n = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t r = n / 2;
  std::vector<double> tmp(src.size());
  for (std::ptrdiff_t y = 0; y < h; ++y)
    for (std::ptrdiff_t x = 0; x < w; ++x)
      for (std::size_t c = 0; c < 3; ++c) {
        double s = 0.0;
        for (std::ptrdiff_t k = 0; k < n; ++k)
          s += taps[k] * src.at(reflect101(x + k - r, w), y, c);
        tmp[(y * w + x) * 3 + c] = s;
      }
  ImageBuffer out(src.width(), src.height());
  for (std::ptrdiff_t y = 0; y < h; ++y)
    for (std::ptrdiff_t x = 0; x < w; ++x)
      for (std::size_t c = 0; c < 3; ++c) {
        double s = 0.0;
        for (std::ptrdiff_t k = 0; k < n; ++k)
          s += taps[k] * tmp[(reflect101(y + k - r, h) * w + x) * 3 + c];
        out.at(x, y, c) = clip_round(s);
      }
  return out;
}

ImageBuffer resize_bicubic(const ImageBuffer& src, std::size_t width,
                           std::size_t height) {
  const auto sw = static_cast<std::ptrdiff_t>(src.width());
  const auto sh = static_cast<std::ptrdiff_t>(src.height());
  const double sx = static_cast<double>(sw) / static_cast<double>(width);
  const double sy = static_cast<double>(sh) / static_cast<double>(height);
  auto clampi = [](std::ptrdiff_t i, std::ptrdiff_t n) {
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
  };
  // Horizontal pass: width x sh.
  std::vector<double> tmp(width * sh * 3);
  for (std::ptrdiff_t y = 0; y < sh; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      const double s = (static_cast<double>(x) + 0.5) * sx - 0.5;
      const double fl = std::floor(s);
      const double t = s - fl;
      const auto x0 = static_cast<std::ptrdiff_t>(fl);
      for (std::size_t c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::ptrdiff_t j = -1; j <= 2; ++j)
          acc += cubic_weight(t - static_cast<double>(j)) *
                 src.at(clampi(x0 + j, sw), y, c);
        tmp[(y * width + x) * 3 + c] = acc;
      }
    }
  ImageBuffer out(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    const double s = (static_cast<double>(y) + 0.5) * sy - 0.5;
    const double fl = std::floor(s);
    const double t = s - fl;
    const auto y0 = static_cast<std::ptrdiff_t>(fl);
    for (std::size_t x = 0; x < width; ++x)
      for (std::size_t c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (std::ptrdiff_t j = -1; j <= 2; ++j)
          acc += cubic_weight(t - static_cast<double>(j)) *
                 tmp[(clampi(y0 + j, sh) * width + x) * 3 + c];
        out.at(x, y, c) = clip_round(acc);
      }
  }
  return out;
}

ImageBuffer add_gaussian_noise(const ImageBuffer& src, double sigma,
                               const Rng64& rng) {
  ImageBuffer out = src;
  auto in = src.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < in.size(); ++i)
    dst[i] = clip_round(in[i] + sigma * rng.normal_at(i));
  return out;
}

ImageBuffer add_poisson_gaussian_noise(const ImageBuffer& src, double a,
                                       double b, const Rng64& rng) {
  ImageBuffer out = src;
  auto in = src.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double y = in[i] / 255.0;
    dst[i] = clip_round(255.0 * (y + std::sqrt(a * y + b) * rng.normal_at(i)));
  }
  return out;
}

ImageBuffer apply_lut(const ImageBuffer& src, const Lut& lut) {
  ImageBuffer out = src;
  for (auto& v : out.data()) v = lut[v];
  return out;
}

ImageBuffer apply_color_matrix(const ImageBuffer& src, const ColorMatrix& m) {
  ImageBuffer out = src;
  auto in = src.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < in.size(); p += 3) {
    const double r = in[p], g = in[p + 1], b = in[p + 2];
    for (std::size_t c = 0; c < 3; ++c)
      dst[p + c] = clip_round(m[3 * c] * r + m[3 * c + 1] * g + m[3 * c + 2] * b);
  }
  return out;
}

}  // namespace serial
}  // namespace forgebench::kernels
