#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "starrgb/corpus.hpp"
#include "starrgb/star_encoder.hpp"
#include "support/test_support.hpp"

using namespace starrgb;
using starrgb::test::fixture_dir;

namespace {

std::vector<double> expected_plane(const nlohmann::json& doc, const char* key) {
  return doc.at(key).get<std::vector<double>>();
}

double max_abs_diff(const Grid<double>& a, const Grid<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double max_rel_diff(const Grid<double>& a, const Grid<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

bool all_zero(const Grid<double>& m) {
  return std::all_of(m.begin(), m.end(), [](double v) { return v == 0.0; });
}

}  // namespace

TEST_CASE("accumulate: identical frames give zero for every metric") {
  const Frame f = test::constant_frame(Extent{4, 3}, {12, 200, 7});
  const ClipSource clip({f, f, f, f}, "still");
  for (Metric m : {Metric::AbsGray, Metric::Euclidean, Metric::CosineScaled}) {
    CHECK(all_zero(accumulate(clip, m, false)));
    CHECK(all_zero(accumulate(clip, m, true)));
  }
}

TEST_CASE("accumulate: a two-frame clip is the per-pixel metric") {
  const ClipSource clip = test::random_clip(Extent{5, 4}, 2, 99);
  const AccumulationMatrix m = accumulate(clip, Metric::CosineScaled, false);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m[i] == cosine_scaled_diff(clip.frames()[0][i], clip.frames()[1][i]).value);
  }
}

TEST_CASE("accumulate: errors") {
  const Frame a = test::constant_frame(Extent{2, 2}, {1, 1, 1});
  const Frame b = test::constant_frame(Extent{2, 3}, {1, 1, 1});
  const std::vector<Frame> single{a};
  CHECK_THROWS_AS(accumulate(std::span<const Frame>(single), Metric::Euclidean, false), Error);
  const std::vector<Frame> mixed{a, b};
  try {
    accumulate(std::span<const Frame>(mixed), Metric::Euclidean, false);
    FAIL("expected mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("accumulate matches the brute-force oracle on the 6-frame 2x2 fixture") {
  const auto doc = test::load_json(fixture_dir() / "fx01.expected.json");
  const ClipSource clip = load_clip(fixture_dir() / "fx01.strv");
  REQUIRE(clip.frame_count() == 6);
  CHECK(test::max_rel_error(accumulate(clip, Metric::CosineScaled, false).data(),
                            expected_plane(doc, "cosine")) <= 1e-9);
  CHECK(test::max_rel_error(accumulate(clip, Metric::Euclidean, false).data(),
                            expected_plane(doc, "euclidean")) <= 1e-9);
  CHECK(test::max_rel_error(accumulate(clip, Metric::AbsGray, false).data(),
                            expected_plane(doc, "abs_gray")) <= 1e-9);
}

TEST_CASE("encode_star_legacy") {
  SUBCASE("constant clip") {
    const Frame f = test::constant_frame(Extent{4, 4}, {50, 60, 70});
    const StarGray star = encode_star_legacy(ClipSource({f, f, f}, "c"), EncodeConfig::legacy());
    CHECK(all_zero(star.m));
    REQUIRE(star.m_x.has_value());
    REQUIRE(star.m_y.has_value());
    CHECK(all_zero(*star.m_x));
    CHECK(all_zero(*star.m_y));
  }

  SUBCASE("one pixel toggling black/white") {
    const std::size_t n = 7;
    const Extent e{3, 3};
    std::vector<Frame> frames;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Pixel> px(e.area(), Pixel{0, 0, 0});
      if (k % 2 == 1) px[4] = Pixel{255, 255, 255};
      frames.emplace_back(e, std::move(px));
    }
    const StarGray star =
        encode_star_legacy(ClipSource(frames, "toggle"), EncodeConfig::legacy(true, false));
    // Closed form: 255 * sum_{k=2}^{N} k/N
    double expected = 0.0;
    for (std::size_t k = 2; k <= n; ++k) expected += 255.0 * double(k) / double(n);
    CHECK(star.m[4] == doctest::Approx(expected).epsilon(1e-9));
    for (std::size_t i = 0; i < e.area(); ++i) {
      if (i != 4) CHECK(star.m[i] == 0.0);
    }
    CHECK_FALSE(star.m_x.has_value());
  }

  SUBCASE("fixture against the oracle") {
    const auto doc = test::load_json(fixture_dir() / "fx01.expected.json");
    const StarGray star = encode_star_legacy(load_clip(fixture_dir() / "fx01.strv"), EncodeConfig::legacy());
    CHECK(test::max_rel_error(star.m.data(), expected_plane(doc, "abs_gray_shadow")) <= 1e-9);
    CHECK(test::max_rel_error(star.m_x->data(), expected_plane(doc, "sobel_x")) <= 1e-9);
    CHECK(test::max_rel_error(star.m_y->data(), expected_plane(doc, "sobel_y")) <= 1e-9);
  }

  SUBCASE("requires abs-gray") {
    CHECK_THROWS_AS(encode_star_legacy(test::random_clip(Extent{2, 2}, 3, 1), EncodeConfig{}), Error);
  }
}

TEST_CASE("sobel on a horizontal ramp with replicated borders") {
  std::vector<double> ramp;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 5; ++j) ramp.push_back(double(j));
  }
  const AccumulationMatrix m(Extent{5, 4}, ramp);
  const SignedMatrix gx = sobel_x(m);
  const SignedMatrix gy = sobel_y(m);
  CHECK(gx.at(1, 2) == 8.0);
  CHECK(gx.at(0, 0) == 4.0);  // left neighbour replicated
  CHECK(gx.at(3, 4) == 4.0);
  CHECK(all_zero(gy));
}

TEST_CASE("EncodeConfig rejects shadow or Sobel outside abs-gray") {
  CHECK_THROWS_AS(EncodeConfig(Metric::CosineScaled, true), Error);
  CHECK_THROWS_AS(EncodeConfig(Metric::Euclidean, false, true), Error);
  CHECK_NOTHROW(EncodeConfig(Metric::AbsGray, true, true));
  CHECK_THROWS_AS(encode_star_rgb(test::random_clip(Extent{2, 2}, 9, 3), EncodeConfig::legacy()),
                  Error);
}

TEST_CASE("split_segments") {
  using R = FrameRange;
  CHECK(split_segments(9) == std::array<R, 3>{R{1, 3}, R{4, 6}, R{7, 9}});
  CHECK(split_segments(10) == std::array<R, 3>{R{1, 3}, R{4, 7}, R{8, 10}});
  CHECK(split_segments(11) == std::array<R, 3>{R{1, 3}, R{4, 8}, R{9, 11}});
  CHECK(split_segments(6) == std::array<R, 3>{R{1, 2}, R{3, 4}, R{5, 6}});
  try {
    split_segments(5);
    FAIL("expected clip too short");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClipTooShort);
    CHECK(std::string(e.what()).find("clip too short") != std::string::npos);
  }
}

TEST_CASE("encode_star_rgb") {
  SUBCASE("constant clip is black") {
    const Frame f = test::constant_frame(Extent{3, 3}, {90, 10, 10});
    const StarRgb star = encode_star_rgb(ClipSource(std::vector<Frame>(9, f), "flat"));
    CHECK(all_zero(star.r));
    CHECK(all_zero(star.g));
    CHECK(all_zero(star.b));
  }

  SUBCASE("motion only in the middle segment") {
    const Frame dark = test::constant_frame(Extent{4, 4}, {20, 20, 20});
    const Frame lit = test::constant_frame(Extent{4, 4}, {200, 50, 90});
    // N = 9: segments [1..3], [4..6], [7..9]; frame 5 differs.
    std::vector<Frame> frames(9, dark);
    frames[4] = lit;
    const StarRgb star = encode_star_rgb(ClipSource(frames, "mid"));
    CHECK(all_zero(star.r));
    CHECK(all_zero(star.b));
    CHECK(star.g.max_value() > 0.0);
  }

  SUBCASE("pairs across segment boundaries are dropped") {
    const Frame a = test::constant_frame(Extent{2, 2}, {20, 20, 20});
    const Frame b = test::constant_frame(Extent{2, 2}, {200, 20, 20});
    // The only change is between frame 3 (end of R) and frame 4 (start of G).
    std::vector<Frame> frames{a, a, a, b, b, b, b, b, b};
    const StarRgb star = encode_star_rgb(ClipSource(frames, "edge"));
    CHECK(star.max_value() == 0.0);
  }

  SUBCASE("12-frame fixture against the oracle") {
    const auto doc = test::load_json(fixture_dir() / "fx02.expected.json");
    const StarRgb star = encode_star_rgb(load_clip(fixture_dir() / "fx02.strv"));
    const auto channels = doc.at("star_rgb").get<std::vector<std::vector<double>>>();
    CHECK(test::max_rel_error(star.r.data(), channels[0]) <= 1e-9);
    CHECK(test::max_rel_error(star.g.data(), channels[1]) <= 1e-9);
    CHECK(test::max_rel_error(star.b.data(), channels[2]) <= 1e-9);
    CHECK(star.segment_bounds[1] == FrameRange{5, 8});
  }

  SUBCASE("too short") {
    try {
      encode_star_rgb(test::random_clip(Extent{2, 2}, 5, 1));
      FAIL("expected clip too short");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ClipTooShort);
    }
  }
}

TEST_CASE("reversal: the single-channel star is invariant") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ClipSource clip = test::random_clip(Extent{9, 7}, 6 + seed * 3, seed);
    const auto fwd = accumulate(clip, Metric::CosineScaled, false);
    const auto rev = accumulate(clip.reversed(), Metric::CosineScaled, false);
    CHECK(max_rel_diff(rev, fwd) <= 1e-9);
  }
}

TEST_CASE("reversal: star RGB swaps R and B and keeps G") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ClipSource clip = test::random_clip(Extent{6, 5}, 6 + seed * 4, seed + 100);
    const StarRgb fwd = encode_star_rgb(clip);
    const StarRgb rev = encode_star_rgb(clip.reversed());
    CHECK(max_rel_diff(rev.r, fwd.b) <= 1e-9);
    CHECK(max_rel_diff(rev.g, fwd.g) <= 1e-9);
    CHECK(max_rel_diff(rev.b, fwd.r) <= 1e-9);
  }
}

TEST_CASE("weighted shadow breaks reversal invariance") {
  const ClipSource clip = test::random_clip(Extent{6, 6}, 10, 5);
  const auto fwd = accumulate(clip, Metric::AbsGray, true);
  const auto rev = accumulate(clip.reversed(), Metric::AbsGray, true);
  CHECK(max_abs_diff(fwd, rev) > 0.0);
}

TEST_CASE("accumulation is additive over consecutive pairs") {
  const ClipSource clip = test::random_clip(Extent{5, 5}, 12, 77);
  for (Metric metric : {Metric::AbsGray, Metric::Euclidean, Metric::CosineScaled}) {
    const auto whole = accumulate(clip, metric, false);
    std::vector<double> sum(whole.size(), 0.0);
    for (std::size_t k = 1; k < clip.frame_count(); ++k) {
      const auto pair = accumulate(clip.frames().subspan(k - 1, 2), metric, false);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += pair[i];
    }
    CHECK(test::max_rel_error(whole.data(), sum) <= 1e-9);
  }
}

TEST_CASE("direction sensitivity on a moving dot") {
  const Extent e{15, 7};
  const ClipSource ltr = test::moving_dot_clip(e, 9, true);
  const ClipSource rtl = test::moving_dot_clip(e, 9, false);
  CHECK(max_rel_diff(accumulate(ltr, Metric::CosineScaled, false),
                     accumulate(rtl, Metric::CosineScaled, false)) <= 1e-9);

  const StarRgb a = encode_star_rgb(ltr);
  const StarRgb b = encode_star_rgb(rtl);
  CHECK(max_abs_diff(a.r, b.r) > 1.0);
  CHECK(max_rel_diff(a.r, b.b) <= 1e-9);
  CHECK(max_rel_diff(a.b, b.r) <= 1e-9);
}
