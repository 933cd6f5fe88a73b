#pragma once

// Shared value types: pixels, frames, clips and the accumulation matrices the
// encoders produce. Everything here is immutable once constructed.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace starrgb {

enum class ErrorKind {
  InvalidInput,
  ClipTooShort,
  DimensionMismatch,
  MissingFrame,
  Parse,
  Io,
};

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Pixel {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  bool valid() const noexcept;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Channel intensities in nominal [0, 255]; returns sqrt(r^2 + g^2 + b^2).
double pixel_norm(const Pixel& p) noexcept;

// BT.601 luma.
double luminance(const Pixel& p) noexcept;

struct Extent {
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t area() const noexcept { return width * height; }

  friend bool operator==(const Extent&, const Extent&) = default;
};

std::string to_string(const Extent& e);

// Row-major grid indexed (row, col) = (i, j).
template <typename T>
class Grid {
 public:
  Grid() = default;

  Grid(Extent extent, std::vector<T> data) : extent_(extent), data_(std::move(data)) {
    if (extent_.width == 0 || extent_.height == 0) {
      throw Error(ErrorKind::InvalidInput, "grid dimensions must be at least 1x1");
    }
    if (data_.size() != extent_.area()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "grid data length " + std::to_string(data_.size()) + " does not match " +
                      to_string(extent_));
    }
  }

  Grid(Extent extent, const T& fill) : Grid(extent, std::vector<T>(extent.area(), fill)) {}

  Extent extent() const noexcept { return extent_; }
  std::size_t width() const noexcept { return extent_.width; }
  std::size_t height() const noexcept { return extent_.height; }
  std::size_t size() const noexcept { return data_.size(); }

  const T& at(std::size_t row, std::size_t col) const { return data_[row * extent_.width + col]; }
  const T& operator[](std::size_t index) const { return data_[index]; }

  std::span<const T> data() const noexcept { return data_; }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Extent extent_;
  std::vector<T> data_;
};

class Frame : public Grid<Pixel> {
 public:
  Frame() = default;
  // Throws InvalidInput when any channel is negative or non-finite.
  Frame(Extent extent, std::vector<Pixel> pixels);
};

// Luminance replicated into all three channels.
Frame to_grayscale(const Frame& frame);

// Nonnegative, finite real values.
class AccumulationMatrix : public Grid<double> {
 public:
  AccumulationMatrix() = default;
  AccumulationMatrix(Extent extent, std::vector<double> values);

  double max_value() const noexcept;
};

// Finite real values of either sign (Sobel responses).
class SignedMatrix : public Grid<double> {
 public:
  SignedMatrix() = default;
  SignedMatrix(Extent extent, std::vector<double> values);

  double max_abs() const noexcept;
};

class ClipSource {
 public:
  // Requires at least two frames, all with the same extent.
  ClipSource(std::vector<Frame> frames, std::string clip_id,
             std::optional<std::string> label = std::nullopt);

  std::span<const Frame> frames() const noexcept { return frames_; }
  std::size_t frame_count() const noexcept { return frames_.size(); }
  Extent extent() const noexcept { return frames_.front().extent(); }
  const std::string& clip_id() const noexcept { return clip_id_; }
  const std::optional<std::string>& label() const noexcept { return label_; }

  // Same frames in the opposite temporal order.
  ClipSource reversed() const;

 private:
  std::vector<Frame> frames_;
  std::string clip_id_;
  std::optional<std::string> label_;
};

// 1-based inclusive frame-index range.
struct FrameRange {
  std::size_t first = 1;
  std::size_t last = 1;

  std::size_t length() const noexcept { return last - first + 1; }

  friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

struct StarGray {
  AccumulationMatrix m;
  std::optional<SignedMatrix> m_x;
  std::optional<SignedMatrix> m_y;
};

struct StarRgb {
  AccumulationMatrix r;
  AccumulationMatrix g;
  AccumulationMatrix b;
  std::array<FrameRange, 3> segment_bounds;

  Extent extent() const noexcept { return r.extent(); }
  double max_value() const noexcept;
};

}  // namespace starrgb
