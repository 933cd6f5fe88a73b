#include "starrgb/attention_fusion.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "starrgb/export.hpp"
#include "starrgb/random.hpp"

namespace starrgb {

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorKind::InvalidInput, "feature vector must have at least one element");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "feature vector has a non-finite value");
  }
}

void ScorerParams::validate() const {
  if (input_dim == 0) throw Error(ErrorKind::InvalidInput, "scorer input dimension must be >= 1");
  if (w1.size() != input_dim * kScorerHiddenUnits || b1.size() != kScorerHiddenUnits ||
      w2.size() != kScorerHiddenUnits) {
    throw Error(ErrorKind::InvalidInput,
                "scorer parameter shapes do not match d=" + std::to_string(input_dim) +
                    " with 128 hidden units");
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(w1.begin(), w1.end(), finite) || !std::all_of(b1.begin(), b1.end(), finite) ||
      !std::all_of(w2.begin(), w2.end(), finite) || !std::isfinite(b2)) {
    throw Error(ErrorKind::InvalidInput, "scorer parameters must be finite");
  }
}

ScorerParams ScorerParams::zeros(std::size_t input_dim) {
  return ScorerParams{input_dim, std::vector<double>(input_dim * kScorerHiddenUnits, 0.0),
                      std::vector<double>(kScorerHiddenUnits, 0.0),
                      std::vector<double>(kScorerHiddenUnits, 0.0), 0.0};
}

ScorerParams ScorerParams::random(std::size_t input_dim, std::uint64_t seed) {
  ScorerParams p = zeros(input_dim);
  Rng rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(kScorerHiddenUnits));
  for (double& w : p.w1) w = rng.uniform(-bound1, bound1);
  for (double& b : p.b1) b = rng.uniform(-bound1, bound1);
  for (double& w : p.w2) w = rng.uniform(-bound2, bound2);
  p.b2 = rng.uniform(-bound2, bound2);
  return p;
}

FeatureVector standardize(const FeatureVector& v) {
  const auto values = v.values();
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : values) var += (x - mean) * (x - mean);
  var /= n;
  const double denom = std::sqrt(var + kStandardizeEpsilon);
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) out.push_back((x - mean) / denom);
  return FeatureVector(std::move(out));
}

double score(const FeatureVector& v, const ScorerParams& params) {
  if (v.size() != params.input_dim) {
    throw Error(ErrorKind::DimensionMismatch, "feature length " + std::to_string(v.size()) +
                                                  " does not match scorer d=" +
                                                  std::to_string(params.input_dim));
  }
  std::vector<double> hidden(params.b1.begin(), params.b1.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v[i];
    const double* row = params.w1.data() + i * kScorerHiddenUnits;
    for (std::size_t h = 0; h < kScorerHiddenUnits; ++h) hidden[h] += x * row[h];
  }
  double out = params.b2;
  for (std::size_t h = 0; h < kScorerHiddenUnits; ++h) {
    out += params.w2[h] * std::max(0.0, hidden[h]);
  }
  return out;
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& s : out) {
    s = std::exp(s - top);
    total += s;
  }
  for (double& s : out) s /= total;
  return out;
}

FusionResult fuse(std::span<const FeatureVector> maps, const ScorerParams& params) {
  if (maps.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "fusion needs at least 2 feature maps, got " +
                                             std::to_string(maps.size()));
  }
  const std::size_t d = maps.front().size();
  for (const FeatureVector& m : maps) {
    if (m.size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "feature maps have different lengths");
    }
  }
  params.validate();

  std::vector<double> scores;
  scores.reserve(maps.size());
  for (const FeatureVector& m : maps) scores.push_back(score(standardize(m), params));

  FusionResult out;
  out.weights = softmax(scores);
  std::vector<double> fused(d, 0.0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const double w = out.weights[i];
    for (std::size_t j = 0; j < d; ++j) fused[j] += w * maps[i][j];
  }
  out.fused = FeatureVector(std::move(fused));
  return out;
}

namespace {

constexpr int kParamsFormatVersion = 1;

}  // namespace

ScorerParams parse_scorer_params(std::string_view json_text) {
  ScorerParams p;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    const int version = doc.at("format_version").get<int>();
    if (version != kParamsFormatVersion) {
      throw Error(ErrorKind::Parse, "unsupported scorer parameter format_version " +
                                        std::to_string(version));
    }
    if (doc.contains("hidden") && doc["hidden"].get<std::size_t>() != kScorerHiddenUnits) {
      throw Error(ErrorKind::Parse, "scorer parameters must have 128 hidden units");
    }
    p.input_dim = doc.at("d").get<std::size_t>();
    p.w1 = doc.at("w1").get<std::vector<double>>();
    p.b1 = doc.at("b1").get<std::vector<double>>();
    p.w2 = doc.at("w2").get<std::vector<double>>();
    p.b2 = doc.at("b2").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed scorer parameters: ") + e.what());
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  return p;
}

std::string serialize_scorer_params(const ScorerParams& params) {
  const nlohmann::json doc = {
      {"format_version", kParamsFormatVersion},
      {"d", params.input_dim},
      {"hidden", kScorerHiddenUnits},
      {"w1", params.w1},
      {"b1", params.b1},
      {"w2", params.w2},
      {"b2", params.b2},
  };
  return doc.dump();
}

ScorerParams load_scorer_params(const std::filesystem::path& path) {
  return parse_scorer_params(read_file(path));
}

}  // namespace starrgb
