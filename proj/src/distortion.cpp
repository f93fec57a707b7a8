#include "forgebench/distortion.hpp"

#include <cmath>
#include <string>

#include "forgebench/codec.hpp"
#include "forgebench/error.hpp"
#include "forgebench/kernels.hpp"
#include "forgebench/operation.hpp"

namespace forgebench {
namespace {

void check_window(int k) {
  if (k < 1)
    throw Error(ErrorCode::NonPositiveKernel,
                "kernel size " + std::to_string(k) + " must be >= 1");
  if (k % 2 == 0)
    throw Error(ErrorCode::EvenKernel,
                "kernel size " + std::to_string(k) + " must be odd");
}

template <typename F>
kernels::Lut make_lut(F&& f) {
  kernels::Lut lut{};
  for (int v = 0; v < 256; ++v) lut[v] = clip_round(f(static_cast<double>(v)));
  return lut;
}

}  // namespace

ImageBuffer gaussian_noise(const ImageBuffer& img, double sigma,
                           const Rng64& rng) {
  require_valid(img);
  if (!(sigma >= 0.0))
    throw Error(ErrorCode::NegativeSigma, "sigma " + format_number(sigma));
  if (sigma == 0.0) return img;
  return kernels::parallel::add_gaussian_noise(img, sigma, rng);
}

ImageBuffer poisson_gaussian_noise(const ImageBuffer& img, double a, double b,
                                   const Rng64& rng) {
  require_valid(img);
  if (!(a >= 0.0) || !(b >= 0.0))
    throw Error(ErrorCode::NegativeParameter,
                "a=" + format_number(a) + " b=" + format_number(b));
  if (a == 0.0 && b == 0.0) return img;
  return kernels::parallel::add_poisson_gaussian_noise(img, a, b, rng);
}

double gaussian_sigma_for_window(int k) {
  return 0.3 * ((k - 1) * 0.5 - 1.0) + 0.8;
}

std::vector<double> gaussian_taps(int k) {
  check_window(k);
  if (k == 1) return {1.0};
  const double sigma = gaussian_sigma_for_window(k);
  const int r = k / 2;
  std::vector<double> taps(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x = i - r;
    taps[i] = std::exp(-(x * x) / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, int k) {
  require_valid(img);
  check_window(k);
  if (k == 1) return img;
  const auto taps = gaussian_taps(k);
  return kernels::parallel::convolve_separable(img, taps);
}

ImageBuffer box_blur(const ImageBuffer& img, int k) {
  require_valid(img);
  check_window(k);
  if (k == 1) return img;
  const std::vector<double> taps(k, 1.0 / k);
  return kernels::parallel::convolve_separable(img, taps);
}

ImageBuffer gamma_correct(const ImageBuffer& img, double gamma) {
  require_valid(img);
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::NonPositiveGamma, "gamma " + format_number(gamma));
  if (gamma == 1.0) return img;
  const auto lut =
      make_lut([gamma](double v) { return 255.0 * std::pow(v / 255.0, gamma); });
  return kernels::parallel::apply_lut(img, lut);
}

ImageBuffer linear_enhance(const ImageBuffer& img, EnhanceMode mode,
                           double value) {
  require_valid(img);
  if (mode == EnhanceMode::brightness) {
    if (!(value >= -255.0 && value <= 255.0))
      throw Error(ErrorCode::OutOfRangeBeta,
                  "beta " + format_number(value) + " outside [-255, 255]");
    if (value == 0.0) return img;
    return kernels::parallel::apply_lut(
        img, make_lut([value](double v) { return v + value; }));
  }
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(ErrorCode::NonPositiveAlpha, "alpha " + format_number(value));
  if (value == 1.0) return img;
  return kernels::parallel::apply_lut(
      img, make_lut([value](double v) { return (v - 128.0) * value + 128.0; }));
}

ImageBuffer scale_intensity(const ImageBuffer& img, double factor) {
  require_valid(img);
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(ErrorCode::NonPositiveAmount, "factor " + format_number(factor));
  if (factor == 1.0) return img;
  return kernels::parallel::apply_lut(
      img, make_lut([factor](double v) { return v * factor; }));
}

ImageBuffer resize_bicubic(const ImageBuffer& img, std::size_t width,
                           std::size_t height) {
  require_valid(img);
  if (width == 0 || height == 0)
    throw Error(ErrorCode::InvalidOperation, "resize to zero dimension");
  if (width == img.width() && height == img.height()) return img;
  return kernels::parallel::resize_bicubic(img, width, height);
}

ImageBuffer resize_cycle(const ImageBuffer& img, int factor) {
  require_valid(img);
  if (factor < 2)
    throw Error(ErrorCode::InvalidOperation,
                "resize factor " + std::to_string(factor) + " must be >= 2");
  const auto f = static_cast<std::size_t>(factor);
  if (img.width() < f || img.height() < f)
    throw Error(ErrorCode::ImageTooSmall,
                std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                    " is smaller than factor " + std::to_string(factor));
  const std::size_t dw = (img.width() + f - 1) / f;
  const std::size_t dh = (img.height() + f - 1) / f;
  const ImageBuffer small = kernels::parallel::resize_bicubic(img, dw, dh);
  return kernels::parallel::resize_bicubic(small, img.width(), img.height());
}

ImageBuffer jpeg_cycle(const ImageBuffer& img, int quality) {
  require_valid(img);
  if (quality < 1 || quality > 100)
    throw Error(ErrorCode::InvalidQuality,
                "quality " + std::to_string(quality) + " outside [1, 100]");
  const auto bytes = encode_image(img, CodecParams::jpeg(quality));
  return decode_image(bytes);
}

}  // namespace forgebench
