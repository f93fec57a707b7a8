#include "forgebench/harness.hpp"

#include <signal.h>
#include <unistd.h>

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <variant>

#include "crypto.hpp"
#include "forgebench/codec.hpp"
#include "forgebench/error.hpp"

namespace forgebench {
namespace {

using Sample = std::variant<ImageBuffer, VideoClip>;

// One adapter process plus its crash budget. Shared slots are guarded by mu.
struct Slot {
  std::unique_ptr<AdapterSession> session;
  int restarts = 0;
  std::mutex mu;
};

class Scorer {
 public:
  Scorer(const RunConfig& cfg, std::vector<std::string> argv) : cfg_(cfg), argv_(std::move(argv)) {}

  std::unique_ptr<AdapterSession> launch() const {
    return std::make_unique<AdapterSession>(argv_, cfg_.timeout);
  }

  // Sample-level problems come back as Error; a spent crash budget throws
  // AdapterCrash wrapped in Fatal.
  double score(Slot& slot, const std::string& id, const Sample& sample) {
    std::lock_guard lock(slot.mu);
    for (;;) {
      if (!slot.session) slot.session = launch_or_fatal();
      try {
        if (const auto* img = std::get_if<ImageBuffer>(&sample))
          return score_one(*slot.session, id, *img, cfg_.timeout);
        return score_one(*slot.session, id, std::get<VideoClip>(sample), cfg_.clip_mode, cfg_.timeout,
                         cfg_.clip_frames);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::AdapterCrash) {
          slot.session.reset();
          if (slot.restarts >= cfg_.max_restarts)
            throw Fatal{Error(ErrorCode::AdapterCrash, "adapter crashed " + std::to_string(slot.restarts + 1) +
                                                           " times; last: " + e.message())};
          ++slot.restarts;
          ++restarts_;
          continue;
        }
        // A late reply would desynchronise the stream, so start afresh.
        if (e.code() == ErrorCode::SampleTimeout) slot.session.reset();
        throw;
      }
    }
  }

  std::size_t restarts() const { return restarts_.load(); }

  struct Fatal {
    Error error;
  };

 private:
  const RunConfig& cfg_;
  std::vector<std::string> argv_;
  std::atomic<std::size_t> restarts_{0};

  std::unique_ptr<AdapterSession> launch_or_fatal() const {
    try {
      return launch();
    } catch (const Error& e) {
      throw Fatal{Error(ErrorCode::AdapterCrash, "adapter restart failed: " + e.message())};
    }
  }
};

std::string failure_text(const std::exception& e) { return e.what(); }

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be >= 1");
  if (cfg.timeout.count() <= 0) throw Error(ErrorCode::InvalidConfig, "timeout must be positive");
  if (split_command(cfg.adapter_cmd).empty()) throw Error(ErrorCode::InvalidConfig, "adapter command is empty");
  if (cfg.clip_frames == 0) throw Error(ErrorCode::InvalidConfig, "clip frame budget must be >= 1");
  if (cfg.max_restarts < 0) throw Error(ErrorCode::InvalidConfig, "max restarts must be >= 0");
  if (cfg.grid.entries.empty()) throw Error(ErrorCode::InvalidConfig, "grid has no entries");
}

Rng64 sample_stream(std::uint64_t seed, const OperationSpec& spec, const std::string& item_id) {
  return Rng64(seed).derive("op/" + spec.severity_label + "/" + item_id);
}

DistortionCache::DistortionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create cache dir " + dir_.string());
}

std::string DistortionCache::key(const std::string& item_id, const OperationSpec& spec,
                                 std::uint64_t seed) const {
  return detail::sha256_hex(item_id + "\n" + canonical_json(spec) + "\n" + std::to_string(seed));
}

std::optional<ImageBuffer> DistortionCache::load_image(const std::string& key) const {
  const auto p = dir_ / (key + ".png");
  if (!std::filesystem::exists(p)) return std::nullopt;
  try {
    return read_image(p);
  } catch (const Error&) {
    return std::nullopt;  // a damaged entry is recomputed
  }
}

void DistortionCache::store_image(const std::string& key, const ImageBuffer& img) const {
  const auto final_path = dir_ / (key + ".png");
  const auto tmp = dir_ / (key + ".tmp" + std::to_string(::getpid()) + "-" +
                           std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
  write_png(tmp, img);
  std::error_code ec;
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

std::optional<VideoClip> DistortionCache::load_clip(const std::string& key) const {
  const auto p = dir_ / key;
  if (!std::filesystem::exists(p / "clip.json")) return std::nullopt;
  try {
    return read_clip(p);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void DistortionCache::store_clip(const std::string& key, const VideoClip& clip) const {
  const auto final_path = dir_ / key;
  const auto tmp = dir_ / (key + ".tmp" + std::to_string(::getpid()) + "-" +
                           std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
  write_clip(tmp, clip);
  std::error_code ec;
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) std::filesystem::remove_all(tmp, ec);
}

SweepResult run_sweep(const Manifest& manifest, const RunConfig& cfg) {
  validate(cfg);
  ::signal(SIGPIPE, SIG_IGN);

  const auto argv = split_command(cfg.adapter_cmd);
  Scorer scorer(cfg, argv);
  auto first = scorer.launch();
  const AdapterHello hello = first->hello();

  const bool shared = wants_shared_session(hello);
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(manifest.items.size())));
  std::vector<std::unique_ptr<Slot>> slots(shared ? 1 : workers);
  for (auto& s : slots) s = std::make_unique<Slot>();
  slots[0]->session = std::move(first);

  std::optional<DistortionCache> cache;
  if (cfg.cache_dir) cache.emplace(*cfg.cache_dir);

  SweepResult result;
  result.meta.tool_version = std::string(kToolVersion);
  result.meta.seed = cfg.seed;
  result.meta.grid_hash = grid_hash(cfg.grid);
  result.meta.adapter_hello = hello.raw;
  bool any_clip = false;
  for (const auto& it : manifest.items) any_clip = any_clip || it.media == MediaKind::clip;
  result.meta.auc_level = any_clip ? "clip:" + std::string(to_string(cfg.clip_mode)) : "image";

  const auto& entries = cfg.grid.entries;
  const std::size_t n_items = manifest.items.size();
  result.records.resize(entries.size() * n_items);
  const OpContext ctx{cfg.plugin};

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto work = [&](Slot& slot) {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_items || abort.load()) return;
      const ManifestItem& item = manifest.items[i];

      for (std::size_t e = 0; e < entries.size(); ++e) {
        auto& rec = result.records[e * n_items + i];
        rec.item_id = item.id;
        rec.op_category = std::string(to_string(entries[e].category));
        rec.severity_label = entries[e].severity_label;
        rec.entry_index = e;
        rec.label = item.label;
      }

      std::optional<Sample> original;
      std::string load_error;
      try {
        if (item.media == MediaKind::image)
          original.emplace(read_image(item.path));
        else
          original.emplace(read_clip(item.path));
      } catch (const std::exception& ex) {
        load_error = "load: " + failure_text(ex);
      }

      for (std::size_t e = 0; e < entries.size(); ++e) {
        if (abort.load()) return;
        auto& rec = result.records[e * n_items + i];
        if (!original) {
          rec.failure = load_error;
          continue;
        }
        const auto& spec = entries[e];
        Sample distorted;
        try {
          const std::string key = cache ? cache->key(item.id, spec, cfg.seed) : std::string();
          const Rng64 rng = sample_stream(cfg.seed, spec, item.id);
          if (const auto* img = std::get_if<ImageBuffer>(&*original)) {
            std::optional<ImageBuffer> hit;
            if (cache && spec.category != OpCategory::unaltered) hit = cache->load_image(key);
            if (!hit) {
              hit = apply_operation(*img, spec, rng, ctx);
              if (cache && spec.category != OpCategory::unaltered) cache->store_image(key, *hit);
            }
            distorted = std::move(*hit);
          } else {
            const auto& clip = std::get<VideoClip>(*original);
            std::optional<VideoClip> hit;
            if (cache && spec.category != OpCategory::unaltered) hit = cache->load_clip(key);
            if (!hit) {
              hit = apply_operation(clip, spec, rng, ctx);
              if (cache && spec.category != OpCategory::unaltered) cache->store_clip(key, *hit);
            }
            distorted = std::move(*hit);
          }
        } catch (const std::exception& ex) {
          rec.failure = "distort: " + failure_text(ex);
          continue;
        }

        try {
          rec.score = scorer.score(slot, std::to_string(e) + "/" + item.id, distorted);
        } catch (const Scorer::Fatal& f) {
          std::lock_guard lock(fatal_mu);
          if (!fatal) fatal = std::make_exception_ptr(f.error);
          abort.store(true);
          return;
        } catch (const std::exception& ex) {
          rec.failure = "score: " + failure_text(ex);
        }
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work, std::ref(*slots[shared ? 0 : w]));
  work(*slots[0]);
  for (auto& t : pool) t.join();

  for (auto& s : slots)
    if (s->session) s->session->shutdown();
  if (fatal) std::rethrow_exception(fatal);
  result.restarts = scorer.restarts();
  return result;
}

}  // namespace forgebench
