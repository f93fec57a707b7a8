#include <cmath>

#include "forgebench/kernels.hpp"

namespace forgebench::kernels::parallel {
namespace {

// Per-output-coordinate source taps for the bicubic passes.
struct CubicTaps {
  std::vector<std::ptrdiff_t> index;  // 4 per output
  std::vector<double> weight;         // 4 per output
};

CubicTaps cubic_taps(std::size_t src_n, std::size_t dst_n) {
  CubicTaps taps;
  taps.index.resize(dst_n * 4);
  taps.weight.resize(dst_n * 4);
  const auto n = static_cast<std::ptrdiff_t>(src_n);
  const double scale = static_cast<double>(src_n) / static_cast<double>(dst_n);
  for (std::size_t o = 0; o < dst_n; ++o) {
    const double s = (static_cast<double>(o) + 0.5) * scale - 0.5;
    const double fl = std::floor(s);
    const double t = s - fl;
    const auto i0 = static_cast<std::ptrdiff_t>(fl);
    for (std::ptrdiff_t j = -1; j <= 2; ++j) {
      std::ptrdiff_t i = i0 + j;
      i = i < 0 ? 0 : (i >= n ? n - 1 : i);
      taps.index[o * 4 + (j + 1)] = i;
      taps.weight[o * 4 + (j + 1)] = cubic_weight(t - static_cast<double>(j));
    }
  }
  return taps;
}

}  // namespace

ImageBuffer convolve_separable(const ImageBuffer& src,
                               std::span<const double> taps) {
  const auto w = static_cast<std::ptrdiff_t>(src.width());
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  const auto n = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t r = n / 2;

  std::vector<std::ptrdiff_t> xi(w * n), yi(h * n);
  for (std::ptrdiff_t x = 0; x < w; ++x)
    for (std::ptrdiff_t k = 0; k < n; ++k) xi[x * n + k] = reflect101(x + k - r, w);
  for (std::ptrdiff_t y = 0; y < h; ++y)
    for (std::ptrdiff_t k = 0; k < n; ++k) yi[y * n + k] = reflect101(y + k - r, h);

  const std::uint8_t* in = src.data().data();
  std::vector<double> tmp(src.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    const std::uint8_t* row = in + y * w * 3;
    double* trow = tmp.data() + y * w * 3;
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      const std::ptrdiff_t* ix = xi.data() + x * n;
      double s0 = 0.0, s1 = 0.0, s2 = 0.0;
      for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::uint8_t* p = row + ix[k] * 3;
        s0 += taps[k] * p[0];
        s1 += taps[k] * p[1];
        s2 += taps[k] * p[2];
      }
      trow[x * 3 + 0] = s0;
      trow[x * 3 + 1] = s1;
      trow[x * 3 + 2] = s2;
    }
  }

  ImageBuffer out(src.width(), src.height());
  std::uint8_t* dst = out.data().data();
  const std::ptrdiff_t stride = w * 3;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    const std::ptrdiff_t* iy = yi.data() + y * n;
    std::uint8_t* drow = dst + y * stride;
    for (std::ptrdiff_t i = 0; i < stride; ++i) {
      double s = 0.0;
      for (std::ptrdiff_t k = 0; k < n; ++k) s += taps[k] * tmp[iy[k] * stride + i];
      drow[i] = clip_round(s);
    }
  }
  return out;
}

ImageBuffer resize_bicubic(const ImageBuffer& src, std::size_t width,
                           std::size_t height) {
  const auto sh = static_cast<std::ptrdiff_t>(src.height());
  const auto sw = static_cast<std::ptrdiff_t>(src.width());
  const CubicTaps tx = cubic_taps(src.width(), width);
  const CubicTaps ty = cubic_taps(src.height(), height);
  const std::uint8_t* in = src.data().data();
  const auto dw = static_cast<std::ptrdiff_t>(width);
  const auto dh = static_cast<std::ptrdiff_t>(height);

  std::vector<double> tmp(width * sh * 3);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < sh; ++y) {
    const std::uint8_t* row = in + y * sw * 3;
    double* trow = tmp.data() + y * dw * 3;
    for (std::ptrdiff_t x = 0; x < dw; ++x) {
      const std::ptrdiff_t* ix = tx.index.data() + x * 4;
      const double* wx = tx.weight.data() + x * 4;
      for (std::size_t c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j) acc += wx[j] * row[ix[j] * 3 + c];
        trow[x * 3 + c] = acc;
      }
    }
  }

  ImageBuffer out(width, height);
  std::uint8_t* dst = out.data().data();
  const std::ptrdiff_t stride = dw * 3;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < dh; ++y) {
    const std::ptrdiff_t* iy = ty.index.data() + y * 4;
    const double* wy = ty.weight.data() + y * 4;
    std::uint8_t* drow = dst + y * stride;
    for (std::ptrdiff_t i = 0; i < stride; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 4; ++j) acc += wy[j] * tmp[iy[j] * stride + i];
      drow[i] = clip_round(acc);
    }
  }
  return out;
}

ImageBuffer add_gaussian_noise(const ImageBuffer& src, double sigma,
                               const Rng64& rng) {
  ImageBuffer out = src;
  const std::uint8_t* in = src.data().data();
  std::uint8_t* dst = out.data().data();
  const auto n = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    dst[i] = clip_round(in[i] + sigma * rng.normal_at(static_cast<std::uint64_t>(i)));
  return out;
}

ImageBuffer add_poisson_gaussian_noise(const ImageBuffer& src, double a,
                                       double b, const Rng64& rng) {
  ImageBuffer out = src;
  const std::uint8_t* in = src.data().data();
  std::uint8_t* dst = out.data().data();
  const auto n = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double y = in[i] / 255.0;
    dst[i] = clip_round(
        255.0 * (y + std::sqrt(a * y + b) * rng.normal_at(static_cast<std::uint64_t>(i))));
  }
  return out;
}

ImageBuffer apply_lut(const ImageBuffer& src, const Lut& lut) {
  ImageBuffer out = src;
  std::uint8_t* dst = out.data().data();
  const auto n = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = lut[dst[i]];
  return out;
}

ImageBuffer apply_color_matrix(const ImageBuffer& src, const ColorMatrix& m) {
  ImageBuffer out = src;
  const std::uint8_t* in = src.data().data();
  std::uint8_t* dst = out.data().data();
  const auto pixels = static_cast<std::ptrdiff_t>(src.size() / 3);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < pixels; ++q) {
    const std::ptrdiff_t p = q * 3;
    const double r = in[p], g = in[p + 1], b = in[p + 2];
    for (std::size_t c = 0; c < 3; ++c)
      dst[p + c] = clip_round(m[3 * c] * r + m[3 * c + 1] * g + m[3 * c + 2] * b);
  }
  return out;
}

}  // namespace forgebench::kernels::parallel
