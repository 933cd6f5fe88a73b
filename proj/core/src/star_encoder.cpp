#include "starrgb/star_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace starrgb {

std::string_view to_string(Normalization mode) noexcept {
  switch (mode) {
    case Normalization::GlobalMax:
      return "global";
    case Normalization::PerChannelMax:
      return "per-channel";
    case Normalization::None:
      return "none";
  }
  return "unknown";
}

std::optional<Normalization> parse_normalization(std::string_view text) noexcept {
  if (text == "global") return Normalization::GlobalMax;
  if (text == "per-channel") return Normalization::PerChannelMax;
  if (text == "none") return Normalization::None;
  return std::nullopt;
}

EncodeConfig::EncodeConfig(Metric metric, bool weighted_shadow, bool sobel_channels,
                           Normalization normalization)
    : metric_(metric),
      weighted_shadow_(weighted_shadow),
      sobel_channels_(sobel_channels),
      normalization_(normalization) {
  if ((weighted_shadow_ || sobel_channels_) && metric_ != Metric::AbsGray) {
    throw Error(ErrorKind::InvalidInput,
                "weighted shadow and Sobel channels are only available with the abs-gray metric");
  }
}

namespace {

template <typename Distance>
void accumulate_pairs(std::span<const Frame> frames, bool weighted_shadow, Distance distance,
                      std::vector<double>& out) {
  const std::size_t n = frames.size();
  const std::size_t area = out.size();
  for (std::size_t k = 2; k <= n; ++k) {
    const double weight = static_cast<double>(k) / static_cast<double>(n);
    const std::span<const Pixel> prev = frames[k - 2].data();
    const std::span<const Pixel> cur = frames[k - 1].data();
    if (weighted_shadow) {
      for (std::size_t idx = 0; idx < area; ++idx) out[idx] += distance(prev[idx], cur[idx]) * weight;
    } else {
      for (std::size_t idx = 0; idx < area; ++idx) out[idx] += distance(prev[idx], cur[idx]);
    }
  }
}

}  // namespace

AccumulationMatrix accumulate(std::span<const Frame> frames, Metric metric, bool weighted_shadow) {
  if (frames.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "accumulation needs at least 2 frames, got " +
                                             std::to_string(frames.size()));
  }
  const Extent extent = frames.front().extent();
  for (const Frame& f : frames) {
    if (f.extent() != extent) {
      throw Error(ErrorKind::DimensionMismatch, "frame is " + to_string(f.extent()) +
                                                    ", expected " + to_string(extent));
    }
  }

  std::vector<double> out(extent.area(), 0.0);
  switch (metric) {
    case Metric::AbsGray:
      accumulate_pairs(frames, weighted_shadow,
                       [](const Pixel& a, const Pixel& b) {
                         return abs_gray_diff(luminance(a), luminance(b));
                       },
                       out);
      break;
    case Metric::Euclidean:
      accumulate_pairs(frames, weighted_shadow, euclidean_diff, out);
      break;
    case Metric::CosineScaled:
      accumulate_pairs(frames, weighted_shadow,
                       [](const Pixel& a, const Pixel& b) { return cosine_scaled_diff(a, b).value; },
                       out);
      break;
  }
  return AccumulationMatrix(extent, std::move(out));
}

AccumulationMatrix accumulate(const ClipSource& clip, Metric metric, bool weighted_shadow) {
  return accumulate(clip.frames(), metric, weighted_shadow);
}

namespace {

struct Clamped {
  const Grid<double>& m;

  double operator()(std::ptrdiff_t row, std::ptrdiff_t col) const {
    const auto h = static_cast<std::ptrdiff_t>(m.height());
    const auto w = static_cast<std::ptrdiff_t>(m.width());
    return m.at(static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(row, 0, h - 1)),
                static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(col, 0, w - 1)));
  }
};

}  // namespace

SignedMatrix sobel_x(const Grid<double>& m) {
  const Clamped at{m};
  std::vector<double> out;
  out.reserve(m.size());
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m.height()); ++i) {
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(m.width()); ++j) {
      out.push_back((at(i - 1, j + 1) - at(i - 1, j - 1)) + 2.0 * (at(i, j + 1) - at(i, j - 1)) +
                    (at(i + 1, j + 1) - at(i + 1, j - 1)));
    }
  }
  return SignedMatrix(m.extent(), std::move(out));
}

SignedMatrix sobel_y(const Grid<double>& m) {
  const Clamped at{m};
  std::vector<double> out;
  out.reserve(m.size());
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m.height()); ++i) {
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(m.width()); ++j) {
      out.push_back((at(i + 1, j - 1) - at(i - 1, j - 1)) + 2.0 * (at(i + 1, j) - at(i - 1, j)) +
                    (at(i + 1, j + 1) - at(i - 1, j + 1)));
    }
  }
  return SignedMatrix(m.extent(), std::move(out));
}

StarGray encode_star_legacy(const ClipSource& clip, const EncodeConfig& config) {
  if (config.metric() != Metric::AbsGray) {
    throw Error(ErrorKind::InvalidInput, "legacy star requires the abs-gray metric");
  }
  // AbsGray already works on luminance, so the frames need no conversion pass.
  StarGray out{accumulate(clip, Metric::AbsGray, config.weighted_shadow()), std::nullopt,
               std::nullopt};
  if (config.sobel_channels()) {
    out.m_x = sobel_x(out.m);
    out.m_y = sobel_y(out.m);
  }
  return out;
}

StarGray encode_star_gray(const ClipSource& clip, const EncodeConfig& config) {
  if (config.metric() == Metric::AbsGray) return encode_star_legacy(clip, config);
  return StarGray{accumulate(clip, config.metric(), false), std::nullopt, std::nullopt};
}

std::array<FrameRange, 3> split_segments(std::size_t frame_count) {
  if (frame_count < kMinStarRgbFrames) {
    throw Error(ErrorKind::ClipTooShort, "clip too short: star RGB needs at least " +
                                             std::to_string(kMinStarRgbFrames) + " frames, got " +
                                             std::to_string(frame_count));
  }
  const std::size_t third = frame_count / 3;
  return {FrameRange{1, third}, FrameRange{third + 1, frame_count - third},
          FrameRange{frame_count - third + 1, frame_count}};
}

StarRgb encode_star_rgb(const ClipSource& clip, const EncodeConfig& config) {
  if (config.weighted_shadow() || config.sobel_channels()) {
    throw Error(ErrorKind::InvalidInput,
                "star RGB does not support weighted shadow or Sobel channels");
  }
  const auto bounds = split_segments(clip.frame_count());
  const auto segment = [&](const FrameRange& range) {
    return accumulate(clip.frames().subspan(range.first - 1, range.length()), config.metric(),
                      false);
  };
  return StarRgb{segment(bounds[0]), segment(bounds[1]), segment(bounds[2]), bounds};
}

}  // namespace starrgb
