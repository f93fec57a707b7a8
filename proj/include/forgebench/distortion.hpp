#pragma once

#include <vector>

#include "forgebench/image.hpp"
#include "forgebench/rng.hpp"

namespace forgebench {

// Image degradation operators. All are pure functions of their arguments and
// preserve dimensions. Parameter errors throw forgebench::Error.

/// Additive white Gaussian noise, sigma in 8-bit units. NegativeSigma.
ImageBuffer gaussian_noise(const ImageBuffer& img, double sigma,
                           const Rng64& rng);

/// Signal-dependent noise z = y + sqrt(a*y + b) * xi on y = in/255.
/// NegativeParameter when a or b is negative.
ImageBuffer poisson_gaussian_noise(const ImageBuffer& img, double a, double b,
                                   const Rng64& rng);

/// sigma_g = 0.3 * ((k - 1) / 2 - 1) + 0.8.
double gaussian_sigma_for_window(int k);
/// Normalized 1-D Gaussian taps of odd length k.
std::vector<double> gaussian_taps(int k);
/// Separable k x k Gaussian, reflect-101 borders. EvenKernel,
/// NonPositiveKernel.
ImageBuffer gaussian_blur(const ImageBuffer& img, int k);
/// k x k box mean, reflect-101 borders. Same errors as gaussian_blur.
ImageBuffer box_blur(const ImageBuffer& img, int k);

/// out = round(255 * (in/255)^gamma). NonPositiveGamma.
ImageBuffer gamma_correct(const ImageBuffer& img, double gamma);

enum class EnhanceMode { brightness, contrast };

/// brightness: out = clip(in + beta), beta in [-255, 255] (OutOfRangeBeta).
/// contrast:   out = clip(round((in - 128) * alpha + 128)), alpha > 0
///             (NonPositiveAlpha).
ImageBuffer linear_enhance(const ImageBuffer& img, EnhanceMode mode,
                           double value);

/// out = clip(round(in * factor)). NonPositiveAmount when factor <= 0.
ImageBuffer scale_intensity(const ImageBuffer& img, double factor);

/// Bicubic (a = -0.5) resample to an arbitrary size.
ImageBuffer resize_bicubic(const ImageBuffer& img, std::size_t width,
                           std::size_t height);

/// Downscale to (ceil(w/f), ceil(h/f)) and back up to (w, h), both bicubic.
/// InvalidOperation for f < 2, ImageTooSmall when a side is below f.
ImageBuffer resize_cycle(const ImageBuffer& img, int factor);

/// Encode as baseline 4:2:0 JPEG at the given quality and decode again.
/// InvalidQuality outside [1, 100].
ImageBuffer jpeg_cycle(const ImageBuffer& img, int quality);

}  // namespace forgebench
