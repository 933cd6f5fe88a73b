#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace starrgb {

// Portable stream of uniform and normal variates. std::mt19937_64 has a
// standard-mandated output sequence; the distribution mapping is done here
// because the standard distributions differ between library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound].
  std::uint64_t below_inclusive(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  // Box-Muller; one value per call.
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
};

// Mixes a run seed with a clip id so per-entry streams do not depend on the
// order entries are processed in.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view clip_id) noexcept;

}  // namespace starrgb
