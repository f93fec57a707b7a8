#include <gtest/gtest.h>

#include <cmath>

#include "forgebench/distortion.hpp"
#include "forgebench/video.hpp"
#include "support.hpp"

namespace fb = forgebench;
using fbtest::code_of;

namespace {

fb::VideoClip make_clip(std::size_t frames, std::size_t w = 24, std::size_t h = 16, std::uint64_t seed = 1) {
  fb::VideoClip clip;
  for (std::size_t t = 0; t < frames; ++t) clip.frames.push_back(fbtest::random_image(w, h, seed * 100 + t));
  return clip;
}

fb::ImageBuffer pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  fb::ImageBuffer img(1, 1);
  img.at(0, 0, 0) = r;
  img.at(0, 0, 1) = g;
  img.at(0, 0, 2) = b;
  return img;
}

TEST(VideoClip, Validation) {
  EXPECT_EQ(code_of([] { fb::require_valid(fb::VideoClip{}); }), fb::ErrorCode::InvalidImage);
  auto clip = make_clip(2);
  clip.frames[1] = fbtest::random_image(5, 5, 1);
  EXPECT_EQ(code_of([&] { fb::require_valid(clip); }), fb::ErrorCode::InvalidImage);
  auto slow = make_clip(1);
  slow.frame_rate = 0;
  EXPECT_EQ(code_of([&] { fb::require_valid(slow); }), fb::ErrorCode::InvalidImage);
}

TEST(Flip, HorizontalAndVertical) {
  fb::ImageBuffer img(3, 2);
  img.at(0, 0, 0) = 1;
  img.at(2, 1, 1) = 9;
  const auto h = fb::flip_frame(img, fb::FlipAxis::horizontal);
  EXPECT_EQ(h.at(2, 0, 0), 1);
  EXPECT_EQ(h.at(0, 1, 1), 9);
  const auto v = fb::flip_frame(img, fb::FlipAxis::vertical);
  EXPECT_EQ(v.at(0, 1, 0), 1);
  EXPECT_EQ(v.at(2, 0, 1), 9);
}

TEST(Flip, Involution) {
  const auto clip = make_clip(4, 13, 7);
  for (auto axis : {fb::FlipAxis::horizontal, fb::FlipAxis::vertical})
    EXPECT_EQ(fb::flip(fb::flip(clip, axis), axis), clip);
}

TEST(Grayscale, LumaWeightsAndIdempotence) {
  EXPECT_EQ(fb::grayscale_frame(pixel(255, 0, 0)).at(0, 0, 1), 76);
  EXPECT_EQ(fb::grayscale_frame(pixel(0, 255, 0)).at(0, 0, 0), 150);
  EXPECT_EQ(fb::grayscale_frame(pixel(0, 0, 255)).at(0, 0, 2), 29);
  const auto clip = make_clip(3);
  const auto once = fb::grayscale(clip);
  EXPECT_EQ(fb::grayscale(once), once);
}

TEST(Vintage, SepiaReferenceValues) {
  const auto white = fb::vintage_frame(pixel(255, 255, 255));
  EXPECT_EQ(white.at(0, 0, 0), 255);
  EXPECT_EQ(white.at(0, 0, 1), 255);
  EXPECT_EQ(white.at(0, 0, 2), 239);  // 255 * 0.937 = 238.9
  const auto gray = fb::vintage_frame(pixel(100, 100, 100));
  EXPECT_EQ(gray.at(0, 0, 0), 135);
  EXPECT_EQ(gray.at(0, 0, 1), 120);
  EXPECT_EQ(gray.at(0, 0, 2), 94);
}

TEST(BrightnessContrast, VideoDefaults) {
  fb::VideoClip clip{{fbtest::constant_image(2, 2, 100)}, 25};
  EXPECT_EQ(fb::brightness_video(clip, fb::BrightnessDirection::lighten, fb::kDefaultLightenAmount).frames[0].at(0, 0, 0), 130);
  EXPECT_EQ(fb::brightness_video(clip, fb::BrightnessDirection::darken, fb::kDefaultDarkenAmount).frames[0].at(0, 0, 0), 70);
  EXPECT_EQ(fb::contrast_video(clip, fb::kDefaultVideoContrast).frames[0].at(0, 0, 0), 86);
  EXPECT_EQ(code_of([&] { fb::brightness_video(clip, fb::BrightnessDirection::lighten, 0); }),
            fb::ErrorCode::NonPositiveAmount);
  EXPECT_EQ(code_of([&] { fb::contrast_video(clip, -1); }), fb::ErrorCode::NonPositiveAlpha);
}

TEST(PerFrame, ClipOpsCommuteWithFrameOps) {
  const auto clip = make_clip(5);
  const auto gray = fb::grayscale(clip);
  const auto sep = fb::vintage(clip);
  const auto res = fb::resolution_reduce(clip, 2, fb::ResolutionMode::keep);
  for (std::size_t t = 0; t < clip.frames.size(); ++t) {
    EXPECT_EQ(gray.frames[t], fb::grayscale_frame(clip.frames[t]));
    EXPECT_EQ(sep.frames[t], fb::vintage_frame(clip.frames[t]));
    EXPECT_EQ(res.frames[t], fb::resize_cycle(clip.frames[t], 2));
  }
}

TEST(TemporalNoise, FramesUseDerivedStreams) {
  const auto clip = make_clip(3);
  const fb::Rng64 rng(17);
  const auto out = fb::temporal_noise(clip, 10, rng);
  for (std::size_t t = 0; t < 3; ++t)
    EXPECT_EQ(out.frames[t], fb::gaussian_noise(clip.frames[t], 10, rng.derive("frame/" + std::to_string(t))));
  EXPECT_EQ(code_of([&] { fb::temporal_noise(clip, -1, rng); }), fb::ErrorCode::NegativeSigma);
}

TEST(TemporalNoise, ConsecutiveFramesDecorrelated) {
  fb::VideoClip clip;
  for (int t = 0; t < 10; ++t) clip.frames.push_back(fbtest::constant_image(64, 64, 128));
  const auto out = fb::temporal_noise(clip, 20, fb::Rng64(4));
  for (std::size_t t = 0; t + 1 < out.frames.size(); ++t) {
    const auto a = out.frames[t].data();
    const auto b = out.frames[t + 1].data();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = a[i] - 128.0, y = b[i] - 128.0;
      sab += x * y;
      saa += x * x;
      sbb += y * y;
    }
    EXPECT_LT(std::abs(sab / std::sqrt(saa * sbb)), 0.05);
  }
}

TEST(Resolution, ModesKeepDimensions) {
  const auto clip = make_clip(2, 32, 24);
  for (auto mode : {fb::ResolutionMode::keep, fb::ResolutionMode::stretch}) {
    const auto out = fb::resolution_reduce(clip, 4, mode);
    EXPECT_TRUE(out.frames[0].same_shape(clip.frames[0]));
  }
  // Stretch leaves columns of a horizontally varying, vertically constant frame intact.
  fb::ImageBuffer stripes(8, 8);
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t x = 0; x < 8; ++x) stripes.at(x, y, 0) = static_cast<std::uint8_t>(x * 30);
  EXPECT_EQ(fb::resolution_reduce_frame(stripes, 2, fb::ResolutionMode::stretch), stripes);
  EXPECT_EQ(code_of([&] { fb::resolution_reduce(clip, 1, fb::ResolutionMode::keep); }),
            fb::ErrorCode::InvalidOperation);
  EXPECT_EQ(code_of([&] { fb::resolution_reduce(clip, 64, fb::ResolutionMode::keep); }),
            fb::ErrorCode::ImageTooSmall);
}

TEST(ClipIo, RoundTrip) {
  fb::TempDir dir("clipio");
  auto clip = make_clip(3, 9, 5);
  clip.frame_rate = 29.97;
  fb::write_clip(dir.path() / "c", clip);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "c" / "frames" / "000002.png"));
  EXPECT_EQ(fb::read_clip(dir.path() / "c"), clip);
  EXPECT_EQ(code_of([&] { fb::read_clip(dir.path() / "missing"); }), fb::ErrorCode::IoError);
  fbtest::write_text(dir.path() / "c" / "clip.json", "{\"fps\": 3}");
  EXPECT_EQ(code_of([&] { fb::read_clip(dir.path() / "c"); }), fb::ErrorCode::MalformedStream);
}

TEST(Transcode, PassThroughAndCrfBounds) {
  const auto clip = make_clip(3, 8, 8);
  EXPECT_EQ(fb::transcode(clip, 23, "cp -r {in} {out}"), clip);
  EXPECT_EQ(code_of([&] { fb::transcode(clip, 60, "cp -r {in} {out}"); }), fb::ErrorCode::InvalidCrf);
  EXPECT_EQ(code_of([&] { fb::transcode(clip, -1, "cp -r {in} {out}"); }), fb::ErrorCode::InvalidCrf);
  EXPECT_EQ(code_of([&] { fb::transcode(clip, 23, "no-such-x264 {in} {out}"); }),
            fb::ErrorCode::PluginLaunchFailure);
  EXPECT_EQ(code_of([&] { fb::transcode(clip, 23, "true {in} {out}"); }), fb::ErrorCode::PluginBadOutput);
}

TEST(Transcode, CrfReachesPlugin) {
  fb::TempDir dir("crf");
  const auto log = dir.path() / "crf.txt";
  const auto clip = make_clip(2, 8, 8);
  fb::transcode(clip, 40, "sh -c \"echo $0 > " + log.string() + "; cp -r {in} {out}\" {crf}");
  EXPECT_EQ(fbtest::read_text(log), "40\n");
}

TEST(Transcode, DroppedFrameIsDetected) {
  fb::TempDir dir("drop");
  const auto script = dir.path() / "drop.sh";
  fbtest::write_text(script,
                     "cp -r \"$1\" \"$2\"\n"
                     "rm \"$2/frames/000002.png\"\n"
                     "echo '{\"frame_rate\": 25}' > \"$2/clip.json\"\n");
  const auto clip = make_clip(3, 8, 8);
  EXPECT_EQ(code_of([&] { fb::transcode(clip, 23, "sh " + script.string() + " {in} {out}"); }),
            fb::ErrorCode::FrameCountMismatch);
}

}  // namespace
