#pragma once

// Pixel kernels. Every kernel exists twice: kernels::parallel (OpenMP,
// used by the operators) and kernels::serial (plain loops, kept as the
// reference the parallel versions are tested against bit-for-bit). Both
// evaluate the same floating-point expression per output sample in the same
// order, so results match exactly regardless of thread count.

#include <array>
#include <cstdint>
#include <span>

#include "forgebench/image.hpp"
#include "forgebench/rng.hpp"

namespace forgebench::kernels {

using Lut = std::array<std::uint8_t, 256>;
using ColorMatrix = std::array<double, 9>;  // row-major, out = M * [R G B]

/// Reflect-101 index mapping (…, 2, 1 | 0, 1, 2, …, n-1 | n-2, …).
std::ptrdiff_t reflect101(std::ptrdiff_t i, std::ptrdiff_t n) noexcept;

/// Catmull-Rom style cubic kernel weight, a = -0.5.
double cubic_weight(double x) noexcept;

namespace serial {

/// Separable convolution with the same odd-length taps horizontally and
/// vertically, reflect-101 borders, double accumulation, single rounding.
ImageBuffer convolve_separable(const ImageBuffer& src,
                               std::span<const double> taps);
/// Bicubic resample with half-pixel centers and clamped borders.
ImageBuffer resize_bicubic(const ImageBuffer& src, std::size_t width,
                           std::size_t height);
/// out[i] = clip_round(in[i] + sigma * rng.normal_at(i)).
ImageBuffer add_gaussian_noise(const ImageBuffer& src, double sigma,
                               const Rng64& rng);
/// y = in/255; out[i] = clip_round(255 * (y + sqrt(a*y + b) * normal_at(i))).
ImageBuffer add_poisson_gaussian_noise(const ImageBuffer& src, double a,
                                       double b, const Rng64& rng);
ImageBuffer apply_lut(const ImageBuffer& src, const Lut& lut);
ImageBuffer apply_color_matrix(const ImageBuffer& src, const ColorMatrix& m);

}  // namespace serial

namespace parallel {

ImageBuffer convolve_separable(const ImageBuffer& src,
                               std::span<const double> taps);
ImageBuffer resize_bicubic(const ImageBuffer& src, std::size_t width,
                           std::size_t height);
ImageBuffer add_gaussian_noise(const ImageBuffer& src, double sigma,
                               const Rng64& rng);
ImageBuffer add_poisson_gaussian_noise(const ImageBuffer& src, double a,
                                       double b, const Rng64& rng);
ImageBuffer apply_lut(const ImageBuffer& src, const Lut& lut);
ImageBuffer apply_color_matrix(const ImageBuffer& src, const ColorMatrix& m);

}  // namespace parallel

}  // namespace forgebench::kernels
