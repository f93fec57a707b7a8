#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace forgebench {

enum class Label { real, fake };
enum class MediaKind { image, clip };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(MediaKind media) noexcept;
/// UnknownLabel for anything but "real"/"fake".
Label parse_label(std::string_view text);

struct ManifestItem {
  std::string id;
  std::filesystem::path path;  // resolved against the manifest directory
  Label label = Label::real;
  MediaKind media = MediaKind::image;
};

struct Manifest {
  std::vector<ManifestItem> items;
  std::filesystem::path root;  // directory relative paths are resolved from
};

/// JSONL, one {"id","path","label":"real"|"fake","media":"image"|"clip"}
/// per line; blank lines are skipped and media defaults to "image".
/// Errors: IoError, ParseError (carries the 1-based line number),
/// DuplicateId, UnknownLabel.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::string_view text,
                        const std::filesystem::path& root = {});

/// Writes the JSONL form, with paths relative to root when possible.
void save_manifest(const std::filesystem::path& path, const Manifest& manifest);

}  // namespace forgebench
