#pragma once

// Condenses a clip into a single image.
//
// Legacy star: grayscale frames, per-pixel absolute differences of
// consecutive frames, optionally weighted by k/N ("weighted shadow"),
// followed by optional 3x3 Sobel responses over the accumulation.
//
// Star RGB: the clip is split into three consecutive sub-videos and each is
// accumulated on its own with the cosine-scaled colour distance; the three
// results become the R, G and B channels. Pairs that straddle a segment
// boundary are not counted.

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "starrgb/model.hpp"
#include "starrgb/pixel_metrics.hpp"

namespace starrgb {

enum class Normalization { GlobalMax, PerChannelMax, None };

std::string_view to_string(Normalization mode) noexcept;
// Accepts "global", "per-channel" and "none".
std::optional<Normalization> parse_normalization(std::string_view text) noexcept;

class EncodeConfig {
 public:
  // weighted_shadow and sobel_channels require Metric::AbsGray; anything
  // else throws InvalidInput.
  explicit EncodeConfig(Metric metric = Metric::CosineScaled, bool weighted_shadow = false,
                        bool sobel_channels = false,
                        Normalization normalization = Normalization::GlobalMax);

  Metric metric() const noexcept { return metric_; }
  bool weighted_shadow() const noexcept { return weighted_shadow_; }
  bool sobel_channels() const noexcept { return sobel_channels_; }
  Normalization normalization() const noexcept { return normalization_; }

  static EncodeConfig legacy(bool weighted_shadow = true, bool sobel_channels = true,
                             Normalization normalization = Normalization::GlobalMax) {
    return EncodeConfig(Metric::AbsGray, weighted_shadow, sobel_channels, normalization);
  }

 private:
  Metric metric_;
  bool weighted_shadow_;
  bool sobel_channels_;
  Normalization normalization_;
};

// Sum over k = 2..N of metric(frame[k-1], frame[k]), times k/N when
// weighted_shadow is set. Frames are 1-based in that formula.
AccumulationMatrix accumulate(const ClipSource& clip, Metric metric, bool weighted_shadow);

// Same over an arbitrary run of frames; k and N are local to the span.
// Throws InvalidInput for fewer than two frames, DimensionMismatch for
// inconsistent extents.
AccumulationMatrix accumulate(std::span<const Frame> frames, Metric metric, bool weighted_shadow);

// 3x3 Sobel responses with edge-replicated borders.
SignedMatrix sobel_x(const Grid<double>& m);
SignedMatrix sobel_y(const Grid<double>& m);

// Requires config.metric() == AbsGray.
StarGray encode_star_legacy(const ClipSource& clip, const EncodeConfig& config);

// Single-channel star for any metric: the legacy encoder for AbsGray, a
// plain accumulation over the whole clip otherwise.
StarGray encode_star_gray(const ClipSource& clip, const EncodeConfig& config);

inline constexpr std::size_t kMinStarRgbFrames = 6;

// Lengths floor(n/3), n - 2 floor(n/3), floor(n/3). Throws ClipTooShort for
// n < 6.
std::array<FrameRange, 3> split_segments(std::size_t frame_count);

// Throws ClipTooShort for N < 6 and InvalidInput when the config asks for
// weighted shadow or Sobel channels.
StarRgb encode_star_rgb(const ClipSource& clip, const EncodeConfig& config = EncodeConfig{});

}  // namespace starrgb
