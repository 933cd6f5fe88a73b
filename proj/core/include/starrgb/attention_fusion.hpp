#pragma once

// Soft-attention ensemble over N equal-length feature vectors.
//
// Each vector is standardized and scored by a shared perceptron
// (d -> 128 ReLU -> 1 linear). The scores go through a softmax and the raw
// (unstandardized) vectors are summed with those weights.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "starrgb/model.hpp"

namespace starrgb {

inline constexpr std::size_t kScorerHiddenUnits = 128;
inline constexpr double kStandardizeEpsilon = 1e-5;

class FeatureVector {
 public:
  FeatureVector() = default;
  // Throws InvalidInput when empty or when a value is not finite.
  explicit FeatureVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<double> values_;
};

struct ScorerParams {
  std::size_t input_dim = 0;
  std::vector<double> w1;  // input_dim x 128, row-major: w1[i * 128 + h]
  std::vector<double> b1;  // 128
  std::vector<double> w2;  // 128
  double b2 = 0.0;

  // Throws InvalidInput when any array length disagrees with input_dim.
  void validate() const;

  static ScorerParams zeros(std::size_t input_dim);
  // w1, b1 ~ U[-1/sqrt(d), 1/sqrt(d)]; w2, b2 ~ U[-1/sqrt(128), 1/sqrt(128)].
  static ScorerParams random(std::size_t input_dim, std::uint64_t seed);
};

struct FusionResult {
  FeatureVector fused;
  std::vector<double> weights;
};

// (v - mean) / sqrt(var + 1e-5) with the population variance of v itself.
FeatureVector standardize(const FeatureVector& v);

double score(const FeatureVector& v, const ScorerParams& params);

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> scores);

// Requires at least two maps of identical length matching params.input_dim.
FusionResult fuse(std::span<const FeatureVector> maps, const ScorerParams& params);

// JSON parameter file: {"format_version": 1, "d": ..., "hidden": 128,
// "w1": [...], "b1": [...], "w2": [...], "b2": ...}.
ScorerParams parse_scorer_params(std::string_view json_text);
std::string serialize_scorer_params(const ScorerParams& params);
ScorerParams load_scorer_params(const std::filesystem::path& path);

}  // namespace starrgb
