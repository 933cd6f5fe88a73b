#pragma once

#include <optional>
#include <string_view>

#include "starrgb/model.hpp"

namespace starrgb {

enum class Metric {
  AbsGray,       // |gray(a) - gray(b)|
  Euclidean,     // ||a - b||
  CosineScaled,  // (1 - lambda/2) * | ||a|| - ||b|| |
};

std::string_view to_string(Metric metric) noexcept;
// Accepts the CLI spellings "abs-gray", "euclidean" and "cosine".
std::optional<Metric> parse_metric(std::string_view text) noexcept;

// Norms below this are treated as having no chromatic direction.
inline constexpr double kZeroNormEpsilon = 1e-12;

struct DistanceBreakdown {
  double lambda = 0.0;         // 1 - cos(theta), in [0, 2]
  double chroma_factor = 1.0;  // 1 - lambda / 2
  double norm_a = 0.0;
  double norm_b = 0.0;
  double value = 0.0;          // chroma_factor * |norm_a - norm_b|
};

double abs_gray_diff(double a, double b) noexcept;

double euclidean_diff(const Pixel& a, const Pixel& b) noexcept;

// When either norm is below kZeroNormEpsilon, lambda is pinned to 0 and the
// value reduces to the plain intensity difference.
DistanceBreakdown cosine_scaled_diff(const Pixel& a, const Pixel& b) noexcept;

// Scalar distance used by the accumulators. AbsGray converts both pixels to
// luminance first.
double metric_distance(Metric metric, const Pixel& a, const Pixel& b) noexcept;

}  // namespace starrgb
