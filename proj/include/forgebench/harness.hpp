#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forgebench/adapter.hpp"
#include "forgebench/grid.hpp"
#include "forgebench/manifest.hpp"
#include "forgebench/operation.hpp"
#include "forgebench/records.hpp"

namespace forgebench {

struct RunConfig {
  SeverityGrid grid;
  std::string adapter_cmd;
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<std::filesystem::path> cache_dir;
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};  // per sample
  ClipMode clip_mode = ClipMode::mean_frames;
  std::size_t clip_frames = kDefaultClipFrames;
  int max_restarts = 2;  // per adapter session
  PluginOptions plugin;
};

/// InvalidConfig for workers < 1, a non-positive timeout or an empty adapter
/// command.
void validate(const RunConfig& cfg);

/// The stream an (item, grid entry) pair draws from:
/// Rng64(seed).derive("op/<severity_label>/<item_id>").
Rng64 sample_stream(std::uint64_t seed, const OperationSpec& spec,
                    const std::string& item_id);

/// Content-addressed store of distorted samples keyed by
/// SHA-256(item_id, canonical spec, seed).
class DistortionCache {
 public:
  explicit DistortionCache(std::filesystem::path dir);
  std::string key(const std::string& item_id, const OperationSpec& spec,
                  std::uint64_t seed) const;
  std::optional<ImageBuffer> load_image(const std::string& key) const;
  void store_image(const std::string& key, const ImageBuffer& img) const;
  std::optional<VideoClip> load_clip(const std::string& key) const;
  void store_clip(const std::string& key, const VideoClip& clip) const;

 private:
  std::filesystem::path dir_;
};

struct SweepResult {
  RunMetadata meta;
  /// Grid-major, manifest order within each entry; exactly
  /// |grid| x |manifest| records, failures included.
  std::vector<ScoreRecord> records;
  std::size_t restarts = 0;
};

/// Scores every (grid entry, item) pair through the adapter. Distorted
/// samples live in memory unless cfg.cache_dir is set. Sample-level errors
/// (operators, timeouts, protocol errors) become failed records; an adapter
/// that crashes more than max_restarts times aborts the run with
/// AdapterCrash. Results do not depend on cfg.workers.
SweepResult run_sweep(const Manifest& manifest, const RunConfig& cfg);

}  // namespace forgebench
