#include "forgebench/rng.hpp"

#include <cmath>
#include <numbers>

namespace forgebench {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53

}  // namespace

std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t Rng64::word_at(std::uint64_t index) const noexcept {
  return splitmix_finalize(origin_ + (index + 1) * kGolden);
}

double Rng64::next_uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * kInv53;
}

std::uint64_t Rng64::next_below(std::uint64_t n) noexcept {
  // floor(u * n) on the 53-bit uniform; exact for the small ranges used here.
  auto v = static_cast<std::uint64_t>(next_uniform() * static_cast<double>(n));
  return v < n ? v : n - 1;
}

double Rng64::next_normal() noexcept {
  const std::uint64_t w0 = next_u64();
  const std::uint64_t w1 = next_u64();
  const double u1 = static_cast<double>((w0 >> 11) + 1) * kInv53;
  const double u2 = static_cast<double>(w1 >> 11) * kInv53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng64::normal_at(std::uint64_t index) const noexcept {
  const std::uint64_t pair = index >> 1;
  const double u1 =
      static_cast<double>((word_at(2 * pair) >> 11) + 1) * kInv53;
  const double u2 = static_cast<double>(word_at(2 * pair + 1) >> 11) * kInv53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return (index & 1) ? r * std::sin(theta) : r * std::cos(theta);
}

Rng64 Rng64::derive(std::string_view label) const noexcept {
  return Rng64(splitmix_finalize(splitmix_finalize(origin_) ^ fnv1a64(label)));
}

}  // namespace forgebench
