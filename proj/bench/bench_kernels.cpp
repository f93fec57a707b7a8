// Serial reference kernels against their OpenMP counterparts.
//
//   forgebench_bench --benchmark_filter=Convolve

#include <benchmark/benchmark.h>

#include "forgebench/distortion.hpp"
#include "forgebench/kernels.hpp"

namespace fb = forgebench;
namespace k = forgebench::kernels;

namespace {

fb::ImageBuffer frame(std::size_t side) {
  fb::Rng64 rng(side);
  fb::ImageBuffer img(side, side);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.next_below(256));
  return img;
}

template <bool Parallel>
void BM_Convolve(benchmark::State& state) {
  const auto img = frame(state.range(0));
  const auto taps = fb::gaussian_taps(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto out = Parallel ? k::parallel::convolve_separable(img, taps) : k::serial::convolve_separable(img, taps);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * img.size());
}

template <bool Parallel>
void BM_Resize(benchmark::State& state) {
  const auto img = frame(state.range(0));
  const std::size_t small = img.width() / 4;
  for (auto _ : state) {
    auto down = Parallel ? k::parallel::resize_bicubic(img, small, small) : k::serial::resize_bicubic(img, small, small);
    auto up = Parallel ? k::parallel::resize_bicubic(down, img.width(), img.height())
                       : k::serial::resize_bicubic(down, img.width(), img.height());
    benchmark::DoNotOptimize(up.data().data());
  }
  state.SetItemsProcessed(state.iterations() * img.size());
}

template <bool Parallel>
void BM_Noise(benchmark::State& state) {
  const auto img = frame(state.range(0));
  const fb::Rng64 rng(1);
  for (auto _ : state) {
    auto out = Parallel ? k::parallel::add_gaussian_noise(img, 10.0, rng) : k::serial::add_gaussian_noise(img, 10.0, rng);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * img.size());
}

template <bool Parallel>
void BM_Lut(benchmark::State& state) {
  const auto img = frame(state.range(0));
  k::Lut lut{};
  for (int i = 0; i < 256; ++i) lut[i] = static_cast<std::uint8_t>(255 - i);
  for (auto _ : state) {
    auto out = Parallel ? k::parallel::apply_lut(img, lut) : k::serial::apply_lut(img, lut);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * img.size());
}

}  // namespace

BENCHMARK(BM_Convolve<false>)->Name("Convolve/serial")->Args({512, 7})->Args({1024, 11});
BENCHMARK(BM_Convolve<true>)->Name("Convolve/parallel")->Args({512, 7})->Args({1024, 11});
BENCHMARK(BM_Resize<false>)->Name("Resize/serial")->Arg(512)->Arg(1024);
BENCHMARK(BM_Resize<true>)->Name("Resize/parallel")->Arg(512)->Arg(1024);
BENCHMARK(BM_Noise<false>)->Name("Noise/serial")->Arg(1024);
BENCHMARK(BM_Noise<true>)->Name("Noise/parallel")->Arg(1024);
BENCHMARK(BM_Lut<false>)->Name("Lut/serial")->Arg(1024);
BENCHMARK(BM_Lut<true>)->Name("Lut/parallel")->Arg(1024);

BENCHMARK_MAIN();
