#include <doctest.h>

#include <map>
#include <set>

#include "voxelkit/metrics.hpp"
#include "voxelkit/segmentation.hpp"
#include "voxelkit/synth.hpp"

#include "oracles.hpp"

using namespace voxelkit;

namespace {

synth::SynthSpec phantom_spec() {
  synth::SynthSpec spec;
  spec.shape = {48, 384, 384};
  spec.n_objects = 20;
  spec.radius_min = 12;
  spec.radius_max = 15;
  spec.seed = 4;
  spec.noise_sigma = 0.05;
  // keep content clear of the quarter-scale closing's border erosion
  spec.inplane_margin = 72;
  return spec;
}

}  // namespace

TEST_CASE("distance transform on simple configurations") {
  // 3x3 foreground block centered in 5x5 background ring (2D)
  const Shape shape{5, 5};
  std::vector<std::uint8_t> m(25, 0);
  for (long y = 1; y <= 3; ++y)
    for (long x = 1; x <= 3; ++x) m[y * 5 + x] = 1;
  const auto d = seg::distance_transform(NdImage::boolean(shape, m));
  CHECK(d.f32_values()[2 * 5 + 2] == doctest::Approx(2.0));
  CHECK(d.f32_values()[1 * 5 + 1] == doctest::Approx(1.0));
  CHECK(d.f32_values()[0] == 0.0f);

  // isolated voxel
  std::vector<std::uint8_t> single(27, 0);
  single[13] = 1;
  const auto ds = seg::distance_transform(NdImage::boolean({3, 3, 3}, single));
  CHECK(ds.f32_values()[13] == doctest::Approx(1.0));
}

TEST_CASE("distance transform equals the exhaustive search on random masks") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Shape shape{16, 16, 16};
    const auto m = oracle::random_mask(shape, seed, 0.7);
    const auto mask = NdImage::boolean(shape, m);
    const auto got = seg::distance_transform(mask);
    const auto expect = oracle::edt_direct(m, shape, {1.0, 1.0, 1.0});
    CHECK(oracle::max_abs_diff(got.f32_values(), expect) < 1e-5);
  }
}

TEST_CASE("distance transform honors anisotropic spacing") {
  const Shape shape{8, 8, 8};
  const auto m = oracle::random_mask(shape, 21, 0.75);
  const std::vector<double> spacing{2.0, 1.0, 0.5};
  const auto mask = NdImage::boolean(shape, m).with_spacing(spacing);
  const auto got = seg::distance_transform(mask);
  const auto expect = oracle::edt_direct(m, shape, spacing);
  CHECK(oracle::max_abs_diff(got.f32_values(), expect) < 1e-5);
}

TEST_CASE("find_seeds labels maximal plateaus") {
  // two bumps farther apart than the footprint
  const Shape shape{1, 5, 17};
  std::vector<float> field(shape_volume(shape), 0.0f);
  field[(0 * 5 + 2) * 17 + 3] = 2.0f;
  field[(0 * 5 + 2) * 17 + 13] = 3.0f;
  const auto seeds =
      seg::find_seeds(NdImage::f32(shape, field), StructuringElement::ball(2, 3));
  const auto sv = seeds.values<std::uint32_t>();
  CHECK(sv[(0 * 5 + 2) * 17 + 3] > 0);
  CHECK(sv[(0 * 5 + 2) * 17 + 13] > 0);
  CHECK(sv[(0 * 5 + 2) * 17 + 3] != sv[(0 * 5 + 2) * 17 + 13]);

  // monotone ramp: only the top plateau is a seed
  std::vector<float> ramp{0, 1, 2, 3, 4, 5};
  const auto rseeds = seg::find_seeds(NdImage::f32({6}, ramp),
                                      StructuringElement::ball(1, 1));
  const auto rv = rseeds.values<std::uint32_t>();
  CHECK(rv[5] == 1);
  for (std::size_t i = 0; i < 5; ++i) CHECK(rv[i] == 0);

  // constant field: one plateau covering everything
  const auto cseeds =
      seg::find_seeds(NdImage::f32({4, 4}, std::vector<float>(16, 1.0f)),
                      StructuringElement::ball(1, 2));
  for (auto v : cseeds.values<std::uint32_t>()) CHECK(v == 1);
}

TEST_CASE("watershed splits a flat bar at the midpoint") {
  const Shape shape{1, 1, 10};
  const auto landscape = NdImage::f32(shape, std::vector<float>(10, 0.0f));
  std::vector<std::uint32_t> s(10, 0);
  s[0] = 1;
  s[9] = 2;
  const auto labels =
      seg::watershed(landscape, NdImage::labels(shape, s));
  const auto lv = labels.values<std::uint32_t>();
  // FIFO among equal priorities: both fronts advance in lockstep; the voxel
  // equidistant from both seeds goes to the earlier-inserted label.
  for (int i = 0; i < 5; ++i) CHECK(lv[i] == 1);
  for (int i = 5; i < 10; ++i) CHECK(lv[i] == 2);
}

TEST_CASE("a single seed floods the whole mask") {
  const Shape shape{4, 4};
  std::vector<std::uint8_t> m(16, 1);
  m[0] = 0;
  std::vector<std::uint32_t> s(16, 0);
  s[5] = 1;
  const auto labels = seg::watershed(
      NdImage::f32(shape, oracle::random_values(shape, 8)),
      NdImage::labels(shape, s), NdImage::boolean(shape, m));
  const auto lv = labels.values<std::uint32_t>();
  CHECK(lv[0] == 0);  // out of mask
  for (std::size_t i = 1; i < 16; ++i) CHECK(lv[i] == 1);
}

TEST_CASE("two basins split at the ridge") {
  const Shape shape{1, 1, 7};
  const auto landscape =
      NdImage::f32(shape, {0.0f, 0.1f, 0.4f, 1.0f, 0.3f, 0.05f, 0.0f});
  std::vector<std::uint32_t> s(7, 0);
  s[0] = 1;
  s[6] = 2;
  const auto labels = seg::watershed(landscape, NdImage::labels(shape, s));
  const auto lv = labels.values<std::uint32_t>();
  CHECK(lv[0] == 1);
  CHECK(lv[1] == 1);
  CHECK(lv[2] == 1);
  CHECK(lv[4] == 2);
  CHECK(lv[5] == 2);
  CHECK(lv[6] == 2);
  // the ridge voxel floods last, from whichever basin pops it first
  CHECK(lv[3] > 0);
}

TEST_CASE("watershed keeps seed labels and produces no new ones") {
  const Shape shape{8, 8, 8};
  const auto landscape = NdImage::f32(shape, oracle::random_values(shape, 55));
  std::vector<std::uint32_t> s(shape_volume(shape), 0);
  s[100] = 3;
  s[400] = 7;
  const auto seeds = NdImage::labels(shape, s);
  const auto labels = seg::watershed(landscape, seeds);
  const auto lv = labels.values<std::uint32_t>();
  CHECK(lv[100] == 3);
  CHECK(lv[400] == 7);
  for (auto v : lv) CHECK((v == 3 || v == 7));
}

TEST_CASE("seeds outside the mask are rejected") {
  const Shape shape{4};
  std::vector<std::uint8_t> m{1, 1, 0, 0};
  std::vector<std::uint32_t> s{0, 0, 1, 0};
  CHECK_THROWS_AS(
      (void)seg::watershed(NdImage::f32(shape, {0, 0, 0, 0}),
                           NdImage::labels(shape, s),
                           NdImage::boolean(shape, m)),
      SeedOutsideMask);
}

TEST_CASE("connected components by connectivity") {
  // two disjoint cubes
  const Shape shape{4, 4, 8};
  std::vector<std::uint8_t> m(shape_volume(shape), 0);
  for (long z = 0; z < 2; ++z)
    for (long y = 0; y < 2; ++y)
      for (long x = 0; x < 2; ++x) {
        m[(z * 4 + y) * 8 + x] = 1;
        m[(z * 4 + y) * 8 + x + 5] = 1;
      }
  const auto cc =
      seg::connected_components(NdImage::boolean(shape, m), seg::Connectivity::face);
  std::uint32_t max_label = 0;
  for (auto v : cc.values<std::uint32_t>()) max_label = std::max(max_label, v);
  CHECK(max_label == 2);

  // diagonal touch: one component under full, two under face
  const Shape d{1, 2, 2};
  std::vector<std::uint8_t> diag{1, 0, 0, 1};
  const auto face = seg::connected_components(NdImage::boolean(d, diag),
                                              seg::Connectivity::face);
  const auto full = seg::connected_components(NdImage::boolean(d, diag),
                                              seg::Connectivity::full);
  std::uint32_t face_max = 0, full_max = 0;
  for (auto v : face.values<std::uint32_t>()) face_max = std::max(face_max, v);
  for (auto v : full.values<std::uint32_t>()) full_max = std::max(full_max, v);
  CHECK(face_max == 2);
  CHECK(full_max == 1);
}

TEST_CASE("connected components match a union-find oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Shape shape{16, 16, 16};
    const auto m = oracle::random_mask(shape, seed + 200, 0.4);

    // oracle: union-find over face-adjacent foreground pairs
    const std::size_t n = m.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find =
        [&](std::size_t i) -> std::size_t {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    const long strides[3] = {256, 16, 1};
    for (long z = 0; z < 16; ++z)
      for (long y = 0; y < 16; ++y)
        for (long x = 0; x < 16; ++x) {
          const long i = z * 256 + y * 16 + x;
          if (!m[i]) continue;
          const long coords[3] = {z, y, x};
          for (int a = 0; a < 3; ++a) {
            if (coords[a] + 1 >= 16) continue;
            const long j = i + strides[a];
            if (m[j]) parent[find(i)] = find(j);
          }
        }

    const auto cc = seg::connected_components(
        NdImage::boolean(shape, m), seg::Connectivity::face);
    const auto lv = cc.values<std::uint32_t>();

    // same partition: bijection between oracle roots and labels
    std::map<std::size_t, std::uint32_t> root_to_label;
    std::map<std::uint32_t, std::size_t> label_to_root;
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i]) {
        CHECK(lv[i] == 0);
        continue;
      }
      const std::size_t r = find(i);
      if (root_to_label.count(r)) {
        CHECK(root_to_label[r] == lv[i]);
      } else {
        root_to_label[r] = lv[i];
      }
      if (label_to_root.count(lv[i])) {
        CHECK(label_to_root[lv[i]] == r);
      } else {
        label_to_root[lv[i]] = r;
      }
    }
    // labels are consecutive 1..K
    std::uint32_t max_label = 0;
    for (auto v : lv) max_label = std::max(max_label, v);
    CHECK(max_label == root_to_label.size());
  }
}

TEST_CASE("nuclei pipeline recovers the synthetic objects") {
  const auto spec = phantom_spec();
  const auto volume = synth::generate_blobs(spec);

  seg::StageTimes times;
  const auto nuclei = seg::segment_nuclei(volume.intensity, &times);
  CHECK(times.size() == 10);  // one entry per pipeline stage

  const double ap = metrics::average_precision(nuclei, volume.labels, 0.5);
  CHECK(ap >= 0.8);

  // determinism: a second run is bitwise identical
  const auto again = seg::segment_nuclei(volume.intensity);
  const auto a = nuclei.values<std::uint32_t>();
  const auto b = again.values<std::uint32_t>();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("nuclei pipeline returns empty labels when nothing thresholds") {
  // sparse salt impulses: the ball-5 median levels them, thresholding then
  // has no structure left (degenerate path, no error)
  const Shape shape{24, 64, 64};
  oracle::Rng rng(3);
  std::vector<float> salt(shape_volume(shape), 0.0f);
  for (int i = 0; i < 40; ++i)
    salt[static_cast<std::size_t>(rng.uniform01() * salt.size())] = 1.0f;
  const auto labels = seg::segment_nuclei(NdImage::f32(shape, salt));
  CHECK(labels.shape() == shape);
  std::uint32_t max_label = 0;
  for (auto v : labels.values<std::uint32_t>())
    max_label = std::max(max_label, v);
  CHECK(max_label == 0);
}

TEST_CASE("cell pipeline assigns exactly one nucleus per cell") {
  const auto spec = phantom_spec();
  const auto phantom = synth::generate_monolayer_phantom(spec);

  const auto nuclei = seg::segment_nuclei(phantom.dna);
  const auto cells = seg::segment_cells(phantom.membrane, phantom.mitochondria,
                                        phantom.dna, nuclei);

  const auto cv = cells.values<std::uint32_t>();
  const auto nv = nuclei.values<std::uint32_t>();

  std::set<std::uint32_t> cell_ids, nucleus_ids;
  for (auto v : cv)
    if (v) cell_ids.insert(v);
  for (auto v : nv)
    if (v) nucleus_ids.insert(v);
  CHECK(!cell_ids.empty());
  CHECK(cell_ids.size() <= nucleus_ids.size());

  // cells keep their nucleus ids; count nucleus labels inside each cell
  std::map<std::uint32_t, std::set<std::uint32_t>> nuclei_in_cell;
  for (std::size_t i = 0; i < cv.size(); ++i)
    if (cv[i] && nv[i]) nuclei_in_cell[cv[i]].insert(nv[i]);
  for (const auto& [cell, nucs] : nuclei_in_cell) {
    CHECK(nucs.size() == 1);
    CHECK(*nucs.begin() == cell);
  }
}

TEST_CASE("cell pipeline with no nuclei returns no cells") {
  synth::SynthSpec spec;
  spec.shape = {20, 48, 48};
  spec.n_objects = 2;
  spec.radius_min = 4;
  spec.radius_max = 5;
  spec.seed = 6;
  const auto phantom = synth::generate_monolayer_phantom(spec);
  const auto empty_nuclei =
      NdImage::labels(spec.shape,
                      std::vector<std::uint32_t>(shape_volume(spec.shape), 0));
  const auto cells = seg::segment_cells(phantom.membrane, phantom.mitochondria,
                                        phantom.dna, empty_nuclei);
  for (auto v : cells.values<std::uint32_t>()) CHECK(v == 0);
}
