#include <doctest.h>

#include "voxelkit/morphology.hpp"

#include "oracles.hpp"

using namespace voxelkit;

namespace {

// Direct set-arithmetic morphology on small masks.
std::vector<std::uint8_t> direct_morph(const std::vector<std::uint8_t>& m,
                                       const Shape& shape,
                                       const StructuringElement& se,
                                       bool erode) {
  std::vector<std::uint8_t> out(m.size());
  const long nz = static_cast<long>(shape[0]);
  const long ny = static_cast<long>(shape[1]);
  const long nx = static_cast<long>(shape[2]);
  for (long z = 0; z < nz; ++z)
    for (long y = 0; y < ny; ++y)
      for (long x = 0; x < nx; ++x) {
        bool result = erode;
        for (const auto& off : se.offsets) {
          const long zz = z + off[0], yy = y + off[1], xx = x + off[2];
          const bool inside =
              zz >= 0 && zz < nz && yy >= 0 && yy < ny && xx >= 0 && xx < nx;
          const bool value = inside && m[(zz * ny + yy) * nx + xx];
          if (erode && !value) {
            result = false;
            break;
          }
          if (!erode && value) {
            result = true;
            break;
          }
        }
        out[(z * ny + y) * nx + x] = result;
      }
  return out;
}

NdImage solid_cube(const Shape& shape, long lo, long hi) {
  std::vector<std::uint8_t> m(shape_volume(shape), 0);
  for (long z = lo; z <= hi; ++z)
    for (long y = lo; y <= hi; ++y)
      for (long x = lo; x <= hi; ++x)
        m[(z * shape[1] + y) * shape[2] + x] = 1;
  return NdImage::boolean(shape, std::move(m));
}

}  // namespace

TEST_CASE("opening preserves the interior of a solid region") {
  const Shape shape{9, 9, 9};
  const auto cube = solid_cube(shape, 1, 7);
  const auto se = StructuringElement::ball(1, 3);
  const auto opened = morph::binary_morphology(cube, se, morph::MorphOp::open);
  const auto cv = cube.values<std::uint8_t>();
  const auto ov = opened.values<std::uint8_t>();
  // interior (distance > 1 from the region boundary) must be unchanged
  for (long z = 2; z <= 6; ++z)
    for (long y = 2; y <= 6; ++y)
      for (long x = 2; x <= 6; ++x) {
        const std::size_t i = (z * 9 + y) * 9 + x;
        CHECK(ov[i] == cv[i]);
      }
}

TEST_CASE("eroding an empty mask stays empty") {
  const auto empty = NdImage::boolean({4, 4, 4}, std::vector<std::uint8_t>(64, 0));
  const auto out = morph::binary_morphology(
      empty, StructuringElement::ball(1, 3), morph::MorphOp::erode);
  for (auto v : out.values<std::uint8_t>()) CHECK(v == 0);
}

TEST_CASE("closing merges blobs separated by one voxel") {
  const Shape shape{7, 7, 9};
  std::vector<std::uint8_t> m(shape_volume(shape), 0);
  // two 2-wide slabs with a 1-voxel gap at x = 4
  for (long z = 2; z <= 4; ++z)
    for (long y = 2; y <= 4; ++y) {
      for (long x = 2; x <= 3; ++x) m[(z * 7 + y) * 9 + x] = 1;
      for (long x = 5; x <= 6; ++x) m[(z * 7 + y) * 9 + x] = 1;
    }
  const auto mask = NdImage::boolean(shape, m);
  const auto se = StructuringElement::ball(1, 3);
  const auto closed = morph::binary_morphology(mask, se, morph::MorphOp::close);

  // oracle: dilate then erode with direct set arithmetic
  const auto dilated = direct_morph(m, shape, se, false);
  const auto expect = direct_morph(dilated, shape, se, true);
  const auto got = closed.values<std::uint8_t>();
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(got[i] == expect[i]);

  // the gap voxel is now foreground
  CHECK(got[(3 * 7 + 3) * 9 + 4] == 1);
}

TEST_CASE("erosion and dilation are dual away from the border") {
  const Shape shape{10, 10, 10};
  const auto m = oracle::random_mask(shape, 17, 0.6);
  const auto mask = NdImage::boolean(shape, m);
  const auto se = StructuringElement::ball(1, 3);

  std::vector<std::uint8_t> inverted(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) inverted[i] = !m[i];
  const auto eroded =
      morph::binary_morphology(mask, se, morph::MorphOp::erode);
  const auto dilated_inv = morph::binary_morphology(
      NdImage::boolean(shape, inverted), se, morph::MorphOp::dilate);

  const auto ev = eroded.values<std::uint8_t>();
  const auto dv = dilated_inv.values<std::uint8_t>();
  for (long z = 1; z < 9; ++z)
    for (long y = 1; y < 9; ++y)
      for (long x = 1; x < 9; ++x) {
        const std::size_t i = (z * 10 + y) * 10 + x;
        CHECK(ev[i] == static_cast<std::uint8_t>(!dv[i]));
      }
}

TEST_CASE("opening and closing are idempotent") {
  const Shape shape{9, 9, 9};
  const auto m = oracle::random_mask(shape, 29, 0.5);
  const auto mask = NdImage::boolean(shape, m);
  const auto se = StructuringElement::ball(1, 3);

  for (auto op : {morph::MorphOp::open, morph::MorphOp::close}) {
    const auto once = morph::binary_morphology(mask, se, op);
    const auto twice = morph::binary_morphology(once, se, op);
    const auto a = once.values<std::uint8_t>();
    const auto b = twice.values<std::uint8_t>();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

namespace {

// Hollow cube: solid from 1..5 with interior 2..4 removed (27-voxel hole).
NdImage hollow_cube() {
  const Shape shape{7, 7, 7};
  std::vector<std::uint8_t> m(shape_volume(shape), 0);
  for (long z = 1; z <= 5; ++z)
    for (long y = 1; y <= 5; ++y)
      for (long x = 1; x <= 5; ++x) m[(z * 7 + y) * 7 + x] = 1;
  for (long z = 2; z <= 4; ++z)
    for (long y = 2; y <= 4; ++y)
      for (long x = 2; x <= 4; ++x) m[(z * 7 + y) * 7 + x] = 0;
  return NdImage::boolean(shape, std::move(m));
}

}  // namespace

TEST_CASE("fill_holes honors the size threshold") {
  const auto mask = hollow_cube();

  // 27-voxel hole, threshold 20: unchanged
  const auto kept = morph::fill_holes(mask, 20);
  const auto kv = kept.values<std::uint8_t>();
  const auto mv = mask.values<std::uint8_t>();
  for (std::size_t i = 0; i < kv.size(); ++i) CHECK(kv[i] == mv[i]);

  // threshold 30: solid
  const auto filled = morph::fill_holes(mask, 30);
  const auto fv = filled.values<std::uint8_t>();
  for (long z = 2; z <= 4; ++z)
    for (long y = 2; y <= 4; ++y)
      for (long x = 2; x <= 4; ++x) CHECK(fv[(z * 7 + y) * 7 + x] == 1);

  // flood-fill oracle: precisely the hole voxels flip
  for (std::size_t i = 0; i < fv.size(); ++i)
    if (mv[i]) CHECK(fv[i] == 1);
}

TEST_CASE("border-touching cavities never fill") {
  const Shape shape{5, 5, 5};
  std::vector<std::uint8_t> m(shape_volume(shape), 1);
  // shaft from the center to the z=0 border
  for (long z = 0; z <= 2; ++z) m[(z * 5 + 2) * 5 + 2] = 0;
  const auto mask = NdImage::boolean(shape, m);
  const auto filled = morph::fill_holes(mask, morph::kUnlimitedHoleSize);
  const auto fv = filled.values<std::uint8_t>();
  CHECK(fv[(2 * 5 + 2) * 5 + 2] == 0);
  CHECK(fv[(0 * 5 + 2) * 5 + 2] == 0);
}

TEST_CASE("fill_holes is idempotent and monotone in its threshold") {
  const auto mask = hollow_cube();
  const auto once = morph::fill_holes(mask, 30);
  const auto twice = morph::fill_holes(once, 30);
  const auto a = once.values<std::uint8_t>();
  const auto b = twice.values<std::uint8_t>();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  // monotone: a larger threshold fills at least as much
  const auto small = morph::fill_holes(mask, 20);
  const auto big = morph::fill_holes(mask, 40);
  const auto sv = small.values<std::uint8_t>();
  const auto bv = big.values<std::uint8_t>();
  for (std::size_t i = 0; i < sv.size(); ++i)
    if (sv[i]) CHECK(bv[i] == 1);
}

TEST_CASE("remove_small_objects drops strictly-smaller labels") {
  // object 1: 49 voxels, object 2: 100 voxels, object 3: 10 voxels
  const Shape shape{1, 20, 20};
  std::vector<std::uint32_t> l(shape_volume(shape), 0);
  std::size_t placed = 0;
  for (std::size_t i = 0; i < 49; ++i) l[placed++] = 1;
  for (std::size_t i = 0; i < 100; ++i) l[placed++] = 2;
  for (std::size_t i = 0; i < 10; ++i) l[placed++] = 3;
  const auto labels = NdImage::labels(shape, l);

  const auto filtered = morph::remove_small_objects(labels, 50);
  std::set<std::uint32_t> kept;
  for (auto v : filtered.values<std::uint32_t>())
    if (v) kept.insert(v);
  CHECK(kept == std::set<std::uint32_t>{2});  // 49 < 50 is removed

  const auto all = morph::remove_small_objects(labels, 0);
  const auto av = all.values<std::uint32_t>();
  const auto lv = labels.values<std::uint32_t>();
  for (std::size_t i = 0; i < av.size(); ++i) CHECK(av[i] == lv[i]);

  // idempotent
  const auto again = morph::remove_small_objects(filtered, 50);
  const auto fv = filtered.values<std::uint32_t>();
  const auto gv = again.values<std::uint32_t>();
  for (std::size_t i = 0; i < fv.size(); ++i) CHECK(gv[i] == fv[i]);
}
