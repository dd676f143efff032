#include <doctest.h>

#include "voxelkit/threshold.hpp"

#include "oracles.hpp"

using namespace voxelkit;

namespace {

// Bimodal / trimodal sample generators used by the oracle comparisons.
std::vector<float> bimodal(std::uint64_t seed, std::size_t n = 4000) {
  oracle::Rng rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) {
    if (rng.uniform01() < 0.5) {
      x = static_cast<float>(0.2 + 0.05 * rng.normal());
    } else {
      x = static_cast<float>(0.8 + 0.07 * rng.normal());
    }
  }
  return v;
}

std::vector<float> trimodal(std::uint64_t seed, std::size_t n = 4000) {
  oracle::Rng rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) {
    const double u = rng.uniform01();
    if (u < 0.34) {
      x = static_cast<float>(0.15 + 0.04 * rng.normal());
    } else if (u < 0.67) {
      x = static_cast<float>(0.5 + 0.04 * rng.normal());
    } else {
      x = static_cast<float>(0.85 + 0.04 * rng.normal());
    }
  }
  return v;
}

}  // namespace

TEST_CASE("perfect bimodal data thresholds between the modes") {
  std::vector<float> v(200);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i < 100 ? 0.0f : 1.0f;
  const float t = thresh::otsu_threshold(NdImage::f32({200}, v));
  CHECK(t > 0.0f);
  CHECK(t < 1.0f);
}

TEST_CASE("otsu equals the exhaustive between-class-variance search") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto v = bimodal(seed);
    const float got =
        thresh::otsu_threshold(NdImage::f32({v.size()}, v));
    const float expect = oracle::otsu_direct(v);
    CHECK(got == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("otsu is affine-consistent within one bin width") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto v = bimodal(seed);
    std::vector<float> scaled(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = 2.0f * v[i];
    const float t1 = thresh::otsu_threshold(NdImage::f32({v.size()}, v));
    const float t2 =
        thresh::otsu_threshold(NdImage::f32({scaled.size()}, scaled));
    float mn = v[0], mx = v[0];
    for (float x : v) {
      mn = std::min(mn, x);
      mx = std::max(mx, x);
    }
    const float bin_width = (mx - mn) / 256;
    CHECK(std::abs(t1 - t2 / 2.0f) <= bin_width + 1e-6f);
  }
}

TEST_CASE("constant images cannot be thresholded") {
  const auto constant = NdImage::f32({16}, std::vector<float>(16, 0.5f));
  CHECK_THROWS_AS((void)thresh::otsu_threshold(constant), DegenerateImage);
  CHECK_THROWS_AS((void)thresh::multi_otsu(constant, 3), DegenerateImage);
}

TEST_CASE("multi_otsu with 2 classes reduces to otsu") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto v = bimodal(seed);
    const auto img = NdImage::f32({v.size()}, v);
    const auto ts = thresh::multi_otsu(img, 2);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0] == thresh::otsu_threshold(img));
  }
}

TEST_CASE("three separated deltas split at the gaps") {
  std::vector<float> v;
  for (int i = 0; i < 100; ++i) v.push_back(0.0f);
  for (int i = 0; i < 100; ++i) v.push_back(0.5f);
  for (int i = 0; i < 100; ++i) v.push_back(1.0f);
  const auto ts = thresh::multi_otsu(NdImage::f32({v.size()}, v), 3);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0] > 0.0f);
  CHECK(ts[0] < 0.5f);
  CHECK(ts[1] > 0.5f);
  CHECK(ts[1] < 1.0f);
}

TEST_CASE("multi_otsu equals the O(bins^2) exhaustive oracle") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto v = trimodal(seed);
    const auto ts = thresh::multi_otsu(NdImage::f32({v.size()}, v), 3);
    const auto expect = oracle::multi_otsu3_direct(v);
    REQUIRE(ts.size() == 2);
    CHECK(ts[0] == doctest::Approx(expect[0]).epsilon(1e-6));
    CHECK(ts[1] == doctest::Approx(expect[1]).epsilon(1e-6));
  }
}

TEST_CASE("multi_otsu thresholds are strictly increasing") {
  for (std::uint64_t seed = 40; seed < 45; ++seed) {
    const auto v = trimodal(seed);
    const auto ts = thresh::multi_otsu(NdImage::f32({v.size()}, v), 3);
    CHECK(ts[0] < ts[1]);
  }
}

TEST_CASE("apply_threshold builds strict-greater masks") {
  const auto img = NdImage::f32({4}, {0.1f, 0.5f, 0.5f, 0.9f});
  const auto mask = thresh::apply_threshold(img, 0.5f);
  CHECK(mask.elem() == Elem::boolean);
  CHECK(mask.values<std::uint8_t>()[0] == 0);
  CHECK(mask.values<std::uint8_t>()[1] == 0);  // equality stays background
  CHECK(mask.values<std::uint8_t>()[3] == 1);
}
