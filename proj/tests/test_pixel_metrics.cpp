#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "starrgb/pixel_metrics.hpp"

using namespace starrgb;

TEST_CASE("abs_gray_diff examples") {
  CHECK(abs_gray_diff(10, 10) == 0.0);
  CHECK(abs_gray_diff(0, 255) == 255.0);
  CHECK(abs_gray_diff(76.245, 29.07) == doctest::Approx(47.175).epsilon(1e-12));
}

TEST_CASE("euclidean_diff examples") {
  CHECK(euclidean_diff({1, 0, 0}, {0, 1, 0}) == doctest::Approx(1.4142136).epsilon(1e-7));
  CHECK(euclidean_diff({7, 8, 9}, {7, 8, 9}) == 0.0);
  CHECK(euclidean_diff({2, 2, 2}, {1, 1, 1}) == doctest::Approx(1.7320508).epsilon(1e-7));
}

TEST_CASE("cosine_scaled_diff examples") {
  SUBCASE("collinear: pure intensity change") {
    const auto d = cosine_scaled_diff({2, 2, 2}, {1, 1, 1});
    CHECK(d.lambda == doctest::Approx(0.0));
    CHECK(d.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("orthogonal equal-norm vectors") {
    const auto d = cosine_scaled_diff({1, 0, 0}, {0, 1, 0});
    CHECK(d.lambda == 1.0);
    CHECK(d.chroma_factor == 0.5);
    CHECK(d.value == 0.0);
  }
  SUBCASE("zero-norm fallback") {
    const auto d = cosine_scaled_diff({255, 0, 0}, {0, 0, 0});
    CHECK(d.lambda == 0.0);
    CHECK(d.chroma_factor == 1.0);
    CHECK(d.value == 255.0);
  }
  SUBCASE("dot 16, both norms 5") {
    // lambda = 1 - 16/25 = 0.36, factor = 0.82, |5 - 5| = 0
    const auto d = cosine_scaled_diff({3, 4, 0}, {0, 4, 3});
    CHECK(d.lambda == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(d.chroma_factor == doctest::Approx(0.82).epsilon(1e-12));
    CHECK(d.norm_a == 5.0);
    CHECK(d.norm_b == 5.0);
    CHECK(d.value == 0.0);
  }
  SUBCASE("both black") {
    const auto d = cosine_scaled_diff({0, 0, 0}, {0, 0, 0});
    CHECK(d.lambda == 0.0);
    CHECK(d.value == 0.0);
  }
}

TEST_CASE("cosine_scaled_diff properties") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> channel(0.0, 255.0);
  std::uniform_real_distribution<double> scale(0.01, 50.0);
  for (int i = 0; i < 5000; ++i) {
    const Pixel a{channel(rng), channel(rng), channel(rng)};
    const Pixel b{channel(rng), channel(rng), channel(rng)};
    const auto ab = cosine_scaled_diff(a, b);
    const auto ba = cosine_scaled_diff(b, a);
    CHECK(ab.value == ba.value);
    CHECK(ab.value >= 0.0);
    CHECK(ab.chroma_factor == 1.0 - ab.lambda / 2.0);
    CHECK(ab.lambda >= 0.0);
    CHECK(ab.lambda <= 1.0);
    const double dn = std::abs(ab.norm_a - ab.norm_b);
    CHECK(ab.value >= 0.5 * dn - 1e-9);
    CHECK(ab.value <= dn + 1e-9);

    const double c = scale(rng);
    const auto scaled = cosine_scaled_diff({c * a.r, c * a.g, c * a.b}, {c * b.r, c * b.g, c * b.b});
    CHECK(std::abs(scaled.lambda - ab.lambda) <= 1e-9);

    CHECK(euclidean_diff(a, a) == 0.0);
    CHECK(abs_gray_diff(a.r, a.r) == 0.0);
  }
}

TEST_CASE("metric names round-trip") {
  for (Metric m : {Metric::AbsGray, Metric::Euclidean, Metric::CosineScaled}) {
    CHECK(parse_metric(to_string(m)) == m);
  }
  CHECK_FALSE(parse_metric("manhattan").has_value());
  CHECK(metric_distance(Metric::AbsGray, {255, 0, 0}, {0, 0, 0}) == doctest::Approx(76.245));
}
