#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forgebench/image.hpp"
#include "forgebench/process.hpp"
#include "forgebench/video.hpp"

namespace forgebench {

// Detector adapter protocol: newline-delimited JSON over the adapter's
// stdin/stdout.
//
//   adapter -> {"type":"hello","name":..,"version":..,
//               "score_orientation":"fake_high","batch_max":N}
//   harness -> {"type":"score","id":..,"png_b64":..}
//            | {"type":"score_path","id":..,"path":..}
//            | {"type":"score_clip","id":..,"frame_paths":[..]}
//   adapter -> {"type":"score","id":..,"score":x} | {"type":"error","id":..,"message":..}
//   harness -> {"type":"bye"}

struct AdapterHello {
  std::string name;
  std::string version;
  int batch_max = 1;
  /// Optional "stateless" field. true allows one session per worker; false,
  /// or batch_max == 1 without it, asks for a single serialized session.
  std::optional<bool> stateless;
  std::string raw;  // hello line as received
};

/// Parses and checks a hello line. AdapterHandshakeFailure when it is not a
/// hello or declares any orientation other than fake_high.
AdapterHello parse_hello(std::string_view line);
/// Whether the harness must funnel every request through one session.
bool wants_shared_session(const AdapterHello& hello) noexcept;

/// Parses a score reply for request id. ProtocolViolation for malformed
/// JSON, a mismatched id, or a score outside [0, 1]; AdapterError when the
/// adapter answered {"type":"error"}.
double parse_score_reply(std::string_view line, std::string_view id);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// One live adapter process. Not thread-safe; the harness gives each worker
/// its own session or serializes access.
class AdapterSession {
 public:
  /// Launches argv and waits for the hello. PluginLaunchFailure when it
  /// cannot start; AdapterHandshakeFailure for a bad, missing or late hello.
  AdapterSession(const std::vector<std::string>& argv,
                 std::chrono::milliseconds handshake_timeout);
  ~AdapterSession();

  AdapterSession(const AdapterSession&) = delete;
  AdapterSession& operator=(const AdapterSession&) = delete;

  const AdapterHello& hello() const noexcept { return hello_; }

  /// AdapterCrash when the process has gone away, SampleTimeout when no
  /// reply arrives in time, or the parse_score_reply errors.
  double score_png(std::string_view id, std::span<const std::uint8_t> png,
                   std::chrono::milliseconds timeout);
  double score_path(std::string_view id, const std::filesystem::path& path,
                    std::chrono::milliseconds timeout);
  double score_clip(std::string_view id,
                    const std::vector<std::filesystem::path>& frame_paths,
                    std::chrono::milliseconds timeout);

  /// Sends bye and closes stdin.
  void shutdown();

 private:
  std::unique_ptr<ChildProcess> process_;
  AdapterHello hello_;

  double request(std::string_view id, const std::string& line,
                 std::chrono::milliseconds timeout);
};

enum class ClipMode { mean_frames, adapter_clip };
std::string_view to_string(ClipMode mode) noexcept;
ClipMode parse_clip_mode(std::string_view name);

inline constexpr std::size_t kDefaultClipFrames = 32;

/// Up to max_frames indices spread uniformly over [0, frame_count):
/// index_i = floor((i + 0.5) * frame_count / n).
std::vector<std::size_t> sample_frame_indices(std::size_t frame_count,
                                              std::size_t max_frames);

double score_one(AdapterSession& session, std::string_view id,
                 const ImageBuffer& img, std::chrono::milliseconds timeout);
/// mean_frames: each sampled frame is scored as an image and the scores are
/// averaged. adapter_clip: sampled frames are written to a temp dir and sent
/// as one score_clip request.
double score_one(AdapterSession& session, std::string_view id,
                 const VideoClip& clip, ClipMode mode,
                 std::chrono::milliseconds timeout,
                 std::size_t max_frames = kDefaultClipFrames);

}  // namespace forgebench
