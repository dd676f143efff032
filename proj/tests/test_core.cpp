#include <doctest.h>

#include "voxelkit/core_ops.hpp"
#include "voxelkit/filters.hpp"
#include "voxelkit/registry.hpp"
#include "voxelkit/segmentation.hpp"

#include "oracles.hpp"

using namespace voxelkit;

TEST_CASE("normalize_minmax maps range onto [0,1]") {
  const auto img = NdImage::f32({3}, {2.0f, 4.0f, 6.0f});
  const auto norm = normalize_minmax(img);
  CHECK(norm.f32_values()[0] == 0.0f);
  CHECK(norm.f32_values()[1] == doctest::Approx(0.5));
  CHECK(norm.f32_values()[2] == 1.0f);
}

TEST_CASE("normalize_minmax sends constant images to zero") {
  const auto img = NdImage::f32({2, 2}, {3.5f, 3.5f, 3.5f, 3.5f});
  const auto norm = normalize_minmax(img);
  for (float v : norm.f32_values()) CHECK(v == 0.0f);
}

TEST_CASE("normalize_minmax promotes u16 endpoints exactly") {
  const auto img = NdImage::u16({2}, {0, 65535});
  const auto norm = normalize_minmax(img);
  CHECK(norm.elem() == Elem::f32);
  CHECK(norm.f32_values()[0] == 0.0f);
  CHECK(norm.f32_values()[1] == 1.0f);
}

TEST_CASE("elementwise basics") {
  const auto a = NdImage::f32({2}, {1.0f, 5.0f});
  const auto b = NdImage::f32({2}, {4.0f, 2.0f});
  const auto mx = vmax(a, b);
  CHECK(mx.f32_values()[0] == 4.0f);
  CHECK(mx.f32_values()[1] == 5.0f);

  // div guards the denominator at 1e-12
  const auto num = NdImage::f32({2}, {1.0f, 1.0f});
  const auto den = NdImage::f32({2}, {0.0f, 2.0f});
  const auto q = div(num, den);
  CHECK(q.f32_values()[0] == doctest::Approx(1e12).epsilon(1e-4));
  CHECK(q.f32_values()[1] == doctest::Approx(0.5));

  const auto ident = mul(a, 1.0f);
  CHECK(ident.f32_values()[0] == a.f32_values()[0]);
  CHECK(ident.f32_values()[1] == a.f32_values()[1]);
}

TEST_CASE("elementwise rejects shape and backend mismatches") {
  const auto a = NdImage::f32({2}, {1.0f, 2.0f});
  const auto b = NdImage::f32({3}, {1.0f, 2.0f, 3.0f});
  CHECK_THROWS_AS((void)add(a, b), ShapeMismatch);

  const auto c = to_backend(a, BackendId::accelerated);
  CHECK_THROWS_AS((void)add(a, c), MixedBackends);
}

TEST_CASE("to_backend is value-preserving and involutive") {
  auto img = NdImage::f32({2, 2}, {1.0f, 2.0f, 3.0f, 4.0f})
                 .with_spacing({0.29, 0.065});

  const auto same = to_backend(img, BackendId::reference);
  CHECK(same.backend() == BackendId::reference);
  CHECK(same.shares_buffer_with(img));

  const auto accel = to_backend(img, BackendId::accelerated);
  CHECK(accel.backend() == BackendId::accelerated);
  CHECK(accel.shares_buffer_with(img));
  CHECK(accel.spacing() == img.spacing());

  const auto back = to_backend(accel, BackendId::reference);
  const auto va = back.f32_values();
  const auto vb = img.f32_values();
  for (std::size_t i = 0; i < va.size(); ++i) CHECK(va[i] == vb[i]);
}

TEST_CASE("dispatch keeps the input backend on the output") {
  const auto img = NdImage::f32({4, 4}, oracle::random_values({4, 4}, 1));
  const auto ref_out = filters::gaussian(img, 1.0);
  CHECK(ref_out.backend() == BackendId::reference);

  const auto acc_out =
      filters::gaussian(to_backend(img, BackendId::accelerated), 1.0);
  CHECK(acc_out.backend() == BackendId::accelerated);
}

TEST_CASE("missing accelerated kernel falls back with a one-time warning") {
  int warnings = 0;
  auto old = registry().set_warning_handler(
      [&](const std::string&) { ++warnings; });

  const Shape shape{6};
  auto landscape = to_backend(NdImage::f32(shape, {0, 1, 2, 3, 4, 5}),
                              BackendId::accelerated);
  auto seeds = to_backend(NdImage::labels(shape, {1, 0, 0, 0, 0, 0}),
                          BackendId::accelerated);

  const auto first = seg::watershed(landscape, seeds);
  CHECK(first.backend() == BackendId::accelerated);  // re-tagged
  CHECK(first.values<std::uint32_t>()[5] == 1);
  (void)seg::watershed(landscape, seeds);
  CHECK(warnings == 1);  // per-process, not per-call

  registry().set_warning_handler(std::move(old));
}

TEST_CASE("unknown operations are rejected") {
  CHECK_THROWS_AS((void)registry().run<NdImage(const NdImage&)>(
                      "no_such_operation", NdImage::f32({1}, {0.0f})),
                  UnknownOperation);
}

TEST_CASE("registry is frozen with a reference kernel per op") {
  CHECK(registry().frozen());
  for (const auto& name : registry().operation_names())
    CHECK(registry().has_kernel(name, BackendId::reference));
}

TEST_CASE("backend equivalence on a sample of ops") {
  const Shape shape{6, 10, 10};
  const auto img = NdImage::f32(shape, oracle::random_values(shape, 42));
  const auto acc = to_backend(img, BackendId::accelerated);

  const auto a = filters::gaussian(img, 1.5);
  const auto b = filters::gaussian(acc, 1.5);
  CHECK(oracle::max_abs_diff(a.f32_values(), b.f32_values()) == 0.0);

  const auto na = normalize_minmax(img);
  const auto nb = normalize_minmax(acc);
  CHECK(oracle::max_abs_diff(na.f32_values(), nb.f32_values()) == 0.0);
}
