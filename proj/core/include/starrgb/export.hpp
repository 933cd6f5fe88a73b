#pragma once

// 8-bit quantization for display, plus the float sidecar that keeps the
// pre-quantization values.
//
// Sidecar layout: one compact JSON line (keys sorted) terminated by '\n',
// then `channels` planes of width*height little-endian IEEE-754 float32,
// row-major, plane after plane.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starrgb/model.hpp"
#include "starrgb/star_encoder.hpp"

namespace starrgb {

// Interleaved 8-bit image with 1 or 3 channels.
struct Image8 {
  Extent extent;
  std::size_t channels = 1;
  std::vector<std::uint8_t> bytes;

  std::uint8_t at(std::size_t row, std::size_t col, std::size_t channel) const {
    return bytes[(row * extent.width + col) * channels + channel];
  }

  friend bool operator==(const Image8&, const Image8&) = default;
};

// floor(x + 0.5) clamped to [0, 255].
std::uint8_t quantize_round_half_up(double x) noexcept;

// GlobalMax scales every channel by the single largest value, PerChannelMax
// scales each channel by its own, None clamps the raw values. All-zero input
// stays all-zero.
Image8 normalize_for_export(const StarRgb& star, Normalization mode);

struct GrayExport {
  Image8 m;
  // Signed responses: divided by their own max |value|, scaled to +-127 and
  // shifted by +128.
  std::optional<Image8> m_x;
  std::optional<Image8> m_y;
};

GrayExport normalize_for_export(const StarGray& star, Normalization mode);

Image8 quantize_signed(const SignedMatrix& m);

struct SidecarHeader {
  Extent extent;
  std::size_t channels = 0;
  std::string clip_id;
  std::string metric;
  std::string mode;  // "star-rgb", "legacy" or "diff"
  std::string normalization;
  std::vector<FrameRange> segment_bounds;
  bool weighted_shadow = false;

  friend bool operator==(const SidecarHeader&, const SidecarHeader&) = default;
};

struct Sidecar {
  SidecarHeader header;
  std::vector<std::vector<float>> planes;
};

Sidecar make_sidecar(const StarRgb& star, std::string clip_id, const EncodeConfig& config);
// Planes are M, then M_X and M_Y when present. segment_bounds is [1, N].
Sidecar make_sidecar(const StarGray& star, std::string clip_id, const EncodeConfig& config,
                     std::size_t frame_count);

std::string encode_sidecar(const Sidecar& sidecar);
// Throws Parse on a malformed header or truncated payload.
Sidecar decode_sidecar(std::string_view bytes);

void write_sidecar(const std::filesystem::path& path, const Sidecar& sidecar);
Sidecar read_sidecar(const std::filesystem::path& path);

// libpng-backed 8-bit PNG I/O; 1 (gray) or 3 (RGB) channels. Reading
// expands palettes and drops alpha, and always yields 3 channels unless the
// source is grayscale.
void write_png(const std::filesystem::path& path, const Image8& image);
Image8 read_png(const std::filesystem::path& path);

// Whole-file helpers shared by the sidecar, container and manifest readers.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace starrgb
