#include "starrgb/model.hpp"

#include <algorithm>
#include <cmath>

namespace starrgb {

bool Pixel::valid() const noexcept {
  return std::isfinite(r) && std::isfinite(g) && std::isfinite(b) && r >= 0.0 && g >= 0.0 &&
         b >= 0.0;
}

double pixel_norm(const Pixel& p) noexcept { return std::sqrt(p.r * p.r + p.g * p.g + p.b * p.b); }

double luminance(const Pixel& p) noexcept { return 0.299 * p.r + 0.587 * p.g + 0.114 * p.b; }

std::string to_string(const Extent& e) {
  return std::to_string(e.width) + "x" + std::to_string(e.height);
}

Frame::Frame(Extent extent, std::vector<Pixel> pixels) : Grid<Pixel>(extent, std::move(pixels)) {
  for (const Pixel& p : *this) {
    if (!p.valid()) {
      throw Error(ErrorKind::InvalidInput, "frame contains a negative or non-finite channel");
    }
  }
}

Frame to_grayscale(const Frame& frame) {
  std::vector<Pixel> out;
  out.reserve(frame.size());
  for (const Pixel& p : frame) {
    const double y = luminance(p);
    out.push_back({y, y, y});
  }
  return Frame(frame.extent(), std::move(out));
}

AccumulationMatrix::AccumulationMatrix(Extent extent, std::vector<double> values)
    : Grid<double>(extent, std::move(values)) {
  for (double v : *this) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::InvalidInput, "accumulation values must be finite and nonnegative");
    }
  }
}

double AccumulationMatrix::max_value() const noexcept {
  double peak = 0.0;
  for (double v : *this) peak = std::max(peak, v);
  return peak;
}

SignedMatrix::SignedMatrix(Extent extent, std::vector<double> values)
    : Grid<double>(extent, std::move(values)) {
  for (double v : *this) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::InvalidInput, "signed matrix values must be finite");
    }
  }
}

double SignedMatrix::max_abs() const noexcept {
  double peak = 0.0;
  for (double v : *this) peak = std::max(peak, std::abs(v));
  return peak;
}

ClipSource::ClipSource(std::vector<Frame> frames, std::string clip_id,
                       std::optional<std::string> label)
    : frames_(std::move(frames)), clip_id_(std::move(clip_id)), label_(std::move(label)) {
  if (frames_.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "clip '" + clip_id_ + "' needs at least 2 frames, got " +
                                             std::to_string(frames_.size()));
  }
  const Extent first = frames_.front().extent();
  for (std::size_t k = 1; k < frames_.size(); ++k) {
    if (frames_[k].extent() != first) {
      throw Error(ErrorKind::DimensionMismatch,
                  "clip '" + clip_id_ + "' frame " + std::to_string(k + 1) + " is " +
                      to_string(frames_[k].extent()) + ", expected " + to_string(first));
    }
  }
}

ClipSource ClipSource::reversed() const {
  std::vector<Frame> frames(frames_.rbegin(), frames_.rend());
  return ClipSource(std::move(frames), clip_id_, label_);
}

double StarRgb::max_value() const noexcept {
  return std::max({r.max_value(), g.max_value(), b.max_value()});
}

}  // namespace starrgb
