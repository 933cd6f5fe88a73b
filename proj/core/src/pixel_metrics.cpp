#include "starrgb/pixel_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace starrgb {

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::AbsGray:
      return "abs-gray";
    case Metric::Euclidean:
      return "euclidean";
    case Metric::CosineScaled:
      return "cosine";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view text) noexcept {
  if (text == "abs-gray") return Metric::AbsGray;
  if (text == "euclidean") return Metric::Euclidean;
  if (text == "cosine") return Metric::CosineScaled;
  return std::nullopt;
}

double abs_gray_diff(double a, double b) noexcept { return std::abs(a - b); }

double euclidean_diff(const Pixel& a, const Pixel& b) noexcept {
  const double dr = a.r - b.r;
  const double dg = a.g - b.g;
  const double db = a.b - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

DistanceBreakdown cosine_scaled_diff(const Pixel& a, const Pixel& b) noexcept {
  DistanceBreakdown out;
  out.norm_a = pixel_norm(a);
  out.norm_b = pixel_norm(b);
  if (out.norm_a >= kZeroNormEpsilon && out.norm_b >= kZeroNormEpsilon) {
    const double dot = a.r * b.r + a.g * b.g + a.b * b.b;
    const double cosine = std::clamp(dot / (out.norm_a * out.norm_b), -1.0, 1.0);
    out.lambda = 1.0 - cosine;
  }
  out.chroma_factor = 1.0 - out.lambda / 2.0;
  out.value = out.chroma_factor * std::abs(out.norm_a - out.norm_b);
  return out;
}

double metric_distance(Metric metric, const Pixel& a, const Pixel& b) noexcept {
  switch (metric) {
    case Metric::AbsGray:
      return abs_gray_diff(luminance(a), luminance(b));
    case Metric::Euclidean:
      return euclidean_diff(a, b);
    case Metric::CosineScaled:
      return cosine_scaled_diff(a, b).value;
  }
  return 0.0;
}

}  // namespace starrgb
