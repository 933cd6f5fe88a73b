#pragma once

// Manifest-driven clip ingestion and the geometric preprocessing applied to
// frames and encoded images.
//
// Manifest: JSON Lines, one object per clip:
//   {"clip_id": "...", "source": "...", "start_frame": 1, "end_frame": 40,
//    "label": "..."}
// Unknown fields are ignored; blank lines are skipped.
//
// Sources are either a directory of numbered frames (000001.png, 12.ppm, ...)
// or a raw STRV1 container:
//   "STRV1\n" + {"frame_count":F,"height":H,"width":W} + "\n"
//   then F frames, each three W*H planes (R, G, B) of unsigned 8-bit values.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "starrgb/export.hpp"
#include "starrgb/model.hpp"
#include "starrgb/random.hpp"

namespace starrgb {

struct ManifestEntry {
  std::string clip_id;
  std::filesystem::path source;
  std::size_t start_frame = 1;  // 1-based, inclusive
  std::size_t end_frame = 2;
  std::string label;
  std::size_t line = 0;  // where it came from; 0 when built in code

  std::size_t frame_count() const noexcept { return end_frame - start_frame + 1; }

  // Line numbers are provenance, not identity.
  friend bool operator==(const ManifestEntry& a, const ManifestEntry& b) {
    return a.clip_id == b.clip_id && a.source == b.source && a.start_frame == b.start_frame &&
           a.end_frame == b.end_frame && a.label == b.label;
  }
};

// Throws Parse naming the offending line for malformed JSON, missing fields,
// start_frame < 1, end_frame <= start_frame, unsafe or duplicate clip ids.
std::vector<ManifestEntry> parse_manifest(std::string_view text);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
std::string serialize_manifest(std::span<const ManifestEntry> entries);

// Makes relative sources relative to base_dir (typically the manifest's
// directory).
void resolve_sources(std::vector<ManifestEntry>& entries, const std::filesystem::path& base_dir);

// Errors: MissingFrame when an index in [start_frame, end_frame] is absent,
// DimensionMismatch for inconsistent frames, Io/Parse for unreadable files.
ClipSource load_clip(const ManifestEntry& entry);

// Every frame of a source, clip id taken from the path stem.
ClipSource load_clip(const std::filesystem::path& source);

struct ContainerInfo {
  Extent extent;
  std::size_t frame_count = 0;
};

ContainerInfo read_container_info(const std::filesystem::path& path);
// Frames are quantized with round-half-up before writing.
void write_container(const std::filesystem::path& path, std::span<const Frame> frames);
// Writes 000001.png, 000002.png, ... into dir, creating it if needed.
void write_frame_directory(const std::filesystem::path& dir, std::span<const Frame> frames);

Frame frame_from_image(const Image8& image);
Image8 image_from_frame(const Frame& frame);
Image8 read_ppm(const std::filesystem::path& path);

// --- geometric transforms -------------------------------------------------

enum class CropMode { Center, Random };

struct CropSpec {
  CropMode mode = CropMode::Center;
  Extent size{140, 110};
  std::uint64_t seed = 0;  // Random mode only
};

struct NoiseSpec {
  double mean = 0.0;
  double stddev = 1.0;
};

struct TransformSpec {
  std::optional<Extent> resize_to;
  std::optional<CropSpec> crop;
  double hflip_prob = 0.0;
  double rotation_degrees = 0.0;  // angle drawn from [-bound, +bound]
  std::optional<NoiseSpec> noise;

  // Throws InvalidInput when the crop exceeds resize_to or a probability or
  // bound is out of range.
  void validate() const;

  // Resize to 160x120, random 140x110 crop, flip p=0.5, +-5 degrees,
  // N(0, 1) noise.
  static TransformSpec training();
  // Resize to 160x120, center 140x110 crop.
  static TransformSpec evaluation();
};

// Bilinear, pixel centres at (i + 0.5) / n, edge-clamped.
Frame resize(const Frame& frame, Extent size);

struct CropOffsets {
  std::size_t top = 0;
  std::size_t left = 0;

  friend bool operator==(const CropOffsets&, const CropOffsets&) = default;
};

// Center: floor((W - w) / 2), floor((H - h) / 2). Random: uniform over the
// valid range from spec.seed. Throws InvalidInput if the window is larger
// than the frame.
CropOffsets crop_offsets(Extent frame, const CropSpec& spec);
Frame crop(const Frame& frame, const CropSpec& spec);
Frame crop_at(const Frame& frame, Extent size, CropOffsets offsets);

Frame hflip(const Frame& frame);
// Rotation about the image centre, counter-clockwise as displayed for
// positive angles. Bilinear sampling, zero outside the source.
Frame rotate(const Frame& frame, double degrees);
// Per-channel additive noise, clamped to [0, 255].
Frame add_gaussian_noise(const Frame& frame, const NoiseSpec& noise, Rng& rng);

// Crop, flip, rotation, noise in that order, all drawn from one stream seeded
// with `seed`. resize_to is not applied here.
Frame augment(const Frame& image, const TransformSpec& spec, std::uint64_t seed);

}  // namespace starrgb
