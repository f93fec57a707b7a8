#pragma once

#include <cstdint>
#include <string_view>

namespace forgebench {

/// Counter-based splitmix64 stream.
///
/// The k-th 64-bit word (k = 0, 1, ...) of a stream with origin seed s is
///
///     z  = s + (k + 1) * 0x9E3779B97F4A7C15          (mod 2^64)
///     z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     word = z ^ (z >> 31)
///
/// which is exactly the sequential splitmix64 generator started at state s.
/// Because any word is addressable by index, pixel-parallel kernels can draw
/// their noise without sharing state.
///
/// Uniforms use the top 53 bits: u = (word >> 11) * 2^-53, in [0, 1).
/// Gaussian variate j is Box-Muller over words 2*(j/2) and 2*(j/2)+1:
///     u1 = ((w0 >> 11) + 1) * 2^-53   (in (0, 1])
///     u2 = (w1 >> 11) * 2^-53
///     r  = sqrt(-2 ln u1),  even j -> r cos(2 pi u2),  odd j -> r sin(2 pi u2)
///
/// Child streams: derive(label) has origin seed
///     mix(mix(s) ^ fnv1a64(label))
/// where mix is the three-line finalizer above applied to its argument and
/// fnv1a64 is 64-bit FNV-1a over the label bytes. Derivation ignores the
/// parent's position, so children depend only on (origin seed, label).
class Rng64 {
 public:
  explicit Rng64(std::uint64_t seed) noexcept : origin_(seed) {}

  std::uint64_t origin_seed() const noexcept { return origin_; }
  std::uint64_t position() const noexcept { return position_; }

  std::uint64_t next_u64() noexcept { return word_at(position_++); }
  /// Uniform in [0, 1).
  double next_uniform() noexcept;
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) noexcept;
  /// Standard normal; consumes two words.
  double next_normal() noexcept;

  std::uint64_t word_at(std::uint64_t index) const noexcept;
  double normal_at(std::uint64_t index) const noexcept;

  Rng64 derive(std::string_view label) const noexcept;

  friend bool operator==(const Rng64&, const Rng64&) = default;

 private:
  std::uint64_t origin_;
  std::uint64_t position_ = 0;
};

std::uint64_t splitmix_finalize(std::uint64_t z) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace forgebench
