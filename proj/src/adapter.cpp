#include "forgebench/adapter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "forgebench/codec.hpp"
#include "forgebench/error.hpp"
#include "json.hpp"

namespace forgebench {
namespace {

using nlohmann::json;

std::string clip_frame_name(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu.png", t);
  return buf;
}

}  // namespace

AdapterHello parse_hello(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    throw Error(ErrorCode::AdapterHandshakeFailure, "hello is not JSON: " + std::string(line));
  }
  if (j.is_object() && j.value("type", "") == "error")
    throw Error(ErrorCode::AdapterHandshakeFailure,
                "adapter failed to start: " + (j.contains("message") ? j["message"].dump() : std::string(line)));
  if (!j.is_object() || j.value("type", "") != "hello")
    throw Error(ErrorCode::AdapterHandshakeFailure, "expected a hello, got " + std::string(line));
  AdapterHello hello;
  hello.raw = std::string(line);
  if (!j.contains("name") || !j["name"].is_string())
    throw Error(ErrorCode::AdapterHandshakeFailure, "hello has no name");
  hello.name = j["name"].get<std::string>();
  if (j.contains("version")) {
    if (!j["version"].is_string()) throw Error(ErrorCode::AdapterHandshakeFailure, "hello version must be a string");
    hello.version = j["version"].get<std::string>();
  }
  if (!j.contains("score_orientation") || j["score_orientation"] != "fake_high")
    throw Error(ErrorCode::AdapterHandshakeFailure,
                "score_orientation must be \"fake_high\", got " +
                    (j.contains("score_orientation") ? j["score_orientation"].dump() : std::string("nothing")));
  if (j.contains("batch_max")) {
    if (!j["batch_max"].is_number_integer() || j["batch_max"].get<long long>() < 1)
      throw Error(ErrorCode::AdapterHandshakeFailure, "batch_max must be a positive integer");
    hello.batch_max = static_cast<int>(std::min<long long>(j["batch_max"].get<long long>(), 1 << 20));
  }
  if (j.contains("stateless")) {
    if (!j["stateless"].is_boolean()) throw Error(ErrorCode::AdapterHandshakeFailure, "stateless must be a boolean");
    hello.stateless = j["stateless"].get<bool>();
  }
  return hello;
}

bool wants_shared_session(const AdapterHello& hello) noexcept {
  if (hello.stateless) return !*hello.stateless;
  return hello.batch_max == 1;
}

double parse_score_reply(std::string_view line, std::string_view id) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    throw Error(ErrorCode::ProtocolViolation, "reply is not JSON: " + std::string(line.substr(0, 200)));
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw Error(ErrorCode::ProtocolViolation, "reply has no type: " + std::string(line.substr(0, 200)));
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>() != id)
    throw Error(ErrorCode::ProtocolViolation, "reply id does not match request " + std::string(id));
  const auto type = j["type"].get<std::string>();
  if (type == "error") {
    const std::string msg = j.contains("message") && j["message"].is_string() ? j["message"].get<std::string>() : "";
    throw Error(ErrorCode::AdapterError, msg.empty() ? "adapter reported an error" : msg);
  }
  if (type != "score") throw Error(ErrorCode::ProtocolViolation, "unexpected reply type " + type);
  if (!j.contains("score") || !j["score"].is_number())
    throw Error(ErrorCode::ProtocolViolation, "reply has no numeric score");
  const double s = j["score"].get<double>();
  if (!std::isfinite(s) || s < 0.0 || s > 1.0)
    throw Error(ErrorCode::ProtocolViolation, "score " + j["score"].dump() + " outside [0, 1]");
  return s;
}

AdapterSession::AdapterSession(const std::vector<std::string>& argv,
                               std::chrono::milliseconds handshake_timeout)
    : process_(std::make_unique<ChildProcess>(argv)) {
  std::string line;
  switch (process_->read_line(line, handshake_timeout)) {
    case ChildProcess::ReadStatus::eof:
      throw Error(ErrorCode::AdapterHandshakeFailure, "adapter exited before hello: " + process_->command_line());
    case ChildProcess::ReadStatus::timeout:
      throw Error(ErrorCode::AdapterHandshakeFailure, "no hello within " +
                                                          std::to_string(handshake_timeout.count()) +
                                                          " ms: " + process_->command_line());
    case ChildProcess::ReadStatus::ok:
      break;
  }
  hello_ = parse_hello(line);
}

AdapterSession::~AdapterSession() {
  try {
    shutdown();
  } catch (...) {
  }
}

double AdapterSession::request(std::string_view id, const std::string& line,
                               std::chrono::milliseconds timeout) {
  if (!process_ || !process_->write_line(line))
    throw Error(ErrorCode::AdapterCrash, "adapter is gone");
  std::string reply;
  switch (process_->read_line(reply, timeout)) {
    case ChildProcess::ReadStatus::eof:
      throw Error(ErrorCode::AdapterCrash, "adapter exited while scoring " + std::string(id));
    case ChildProcess::ReadStatus::timeout:
      throw Error(ErrorCode::SampleTimeout,
                  "no score for " + std::string(id) + " within " + std::to_string(timeout.count()) + " ms");
    case ChildProcess::ReadStatus::ok:
      break;
  }
  return parse_score_reply(reply, id);
}

double AdapterSession::score_png(std::string_view id, std::span<const std::uint8_t> png,
                                 std::chrono::milliseconds timeout) {
  const json req = {{"type", "score"}, {"id", id}, {"png_b64", base64_encode(png)}};
  return request(id, req.dump(), timeout);
}

double AdapterSession::score_path(std::string_view id, const std::filesystem::path& path,
                                  std::chrono::milliseconds timeout) {
  const json req = {{"type", "score_path"}, {"id", id}, {"path", path.string()}};
  return request(id, req.dump(), timeout);
}

double AdapterSession::score_clip(std::string_view id,
                                  const std::vector<std::filesystem::path>& frame_paths,
                                  std::chrono::milliseconds timeout) {
  json paths = json::array();
  for (const auto& p : frame_paths) paths.push_back(p.string());
  const json req = {{"type", "score_clip"}, {"id", id}, {"frame_paths", paths}};
  return request(id, req.dump(), timeout);
}

void AdapterSession::shutdown() {
  if (!process_) return;
  process_->write_line(R"({"type":"bye"})");
  process_->close_stdin();
  process_.reset();
}

std::string_view to_string(ClipMode mode) noexcept {
  return mode == ClipMode::mean_frames ? "mean_frames" : "adapter_clip";
}

ClipMode parse_clip_mode(std::string_view name) {
  if (name == "mean_frames") return ClipMode::mean_frames;
  if (name == "adapter_clip") return ClipMode::adapter_clip;
  throw Error(ErrorCode::InvalidConfig, "clip mode must be mean_frames|adapter_clip, got " + std::string(name));
}

std::vector<std::size_t> sample_frame_indices(std::size_t frame_count, std::size_t max_frames) {
  const std::size_t n = std::min(frame_count, max_frames);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i)
    idx[i] = static_cast<std::size_t>((static_cast<double>(i) + 0.5) * static_cast<double>(frame_count) /
                                      static_cast<double>(n));
  return idx;
}

double score_one(AdapterSession& session, std::string_view id, const ImageBuffer& img,
                 std::chrono::milliseconds timeout) {
  const auto png = encode_image(img, CodecParams::png());
  return session.score_png(id, png, timeout);
}

double score_one(AdapterSession& session, std::string_view id, const VideoClip& clip, ClipMode mode,
                 std::chrono::milliseconds timeout, std::size_t max_frames) {
  require_valid(clip);
  if (max_frames == 0) throw Error(ErrorCode::InvalidConfig, "clip frame budget must be >= 1");
  const auto idx = sample_frame_indices(clip.frames.size(), max_frames);
  if (mode == ClipMode::mean_frames) {
    double sum = 0.0;
    for (std::size_t t : idx) sum += score_one(session, std::string(id) + "#" + std::to_string(t), clip.frames[t], timeout);
    return sum / static_cast<double>(idx.size());
  }
  TempDir tmp("forgebench-clip");
  std::vector<std::filesystem::path> paths;
  for (std::size_t t : idx) {
    paths.push_back(tmp.path() / clip_frame_name(t));
    write_png(paths.back(), clip.frames[t]);
  }
  return session.score_clip(id, paths, timeout);
}

}  // namespace forgebench
