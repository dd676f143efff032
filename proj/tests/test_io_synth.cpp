#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "voxelkit/io.hpp"
#include "voxelkit/metrics.hpp"
#include "voxelkit/synth.hpp"

#include "oracles.hpp"

using namespace voxelkit;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("voxelkit_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("volume round trip is bitwise identity for every element kind") {
  TempDir dir;

  const auto f = NdImage::f32({2, 2, 2}, {0, 1, 2, 3, 4, 5, 6, 7})
                     .with_spacing({0.29, 0.065, 0.065});
  io::write_volume(dir.file("f.ndiv"), f);
  const auto f2 = io::read_volume(dir.file("f.ndiv"));
  CHECK(f2.shape() == f.shape());
  CHECK(f2.elem() == Elem::f32);
  REQUIRE(f2.spacing().has_value());
  CHECK((*f2.spacing())[0] == doctest::Approx(0.29));
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(f2.f32_values()[i] == f.f32_values()[i]);

  io::write_volume(dir.file("f2.ndiv"), f2);
  CHECK(slurp(dir.file("f.ndiv")) == slurp(dir.file("f2.ndiv")));

  const auto u = NdImage::u16({3}, {0, 7, 65535});
  io::write_volume(dir.file("u.ndiv"), u);
  CHECK(io::read_volume(dir.file("u.ndiv")).values<std::uint16_t>()[2] == 65535);

  const auto l = NdImage::labels({2, 2}, {0, 1, 2, 3});
  io::write_volume(dir.file("l.ndiv"), l);
  CHECK(io::read_volume(dir.file("l.ndiv")).values<std::uint32_t>()[3] == 3);

  const auto b = NdImage::boolean({2, 2}, {1, 0, 0, 1});
  io::write_volume(dir.file("b.ndiv"), b);
  CHECK(io::read_volume(dir.file("b.ndiv")).values<std::uint8_t>()[0] == 1);
}

TEST_CASE("volume format failure modes") {
  TempDir dir;

  {
    std::ofstream out(dir.file("bad.ndiv"), std::ios::binary);
    out << "JUNKJUNKJUNK";
  }
  CHECK_THROWS_AS((void)io::read_volume(dir.file("bad.ndiv")), BadMagic);

  const auto img = NdImage::f32({2, 2}, {1, 2, 3, 4});
  io::write_volume(dir.file("ok.ndiv"), img);

  // payload shorter than the header promises
  auto bytes = slurp(dir.file("ok.ndiv"));
  {
    std::ofstream out(dir.file("short.ndiv"), std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 7));
  }
  CHECK_THROWS_AS((void)io::read_volume(dir.file("short.ndiv")),
                  TruncatedPayload);

  // trailing garbage violates the length rule too
  {
    std::ofstream out(dir.file("long.ndiv"), std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out << "extra";
  }
  CHECK_THROWS_AS((void)io::read_volume(dir.file("long.ndiv")),
                  TruncatedPayload);

  // corrupt the JSON header
  {
    auto corrupted = bytes;
    corrupted[9] = '?';
    std::ofstream out(dir.file("hdr.ndiv"), std::ios::binary);
    out.write(corrupted.data(), static_cast<std::streamsize>(corrupted.size()));
  }
  CHECK_THROWS_AS((void)io::read_volume(dir.file("hdr.ndiv")), HeaderMismatch);

  CHECK_THROWS_AS((void)io::read_volume(dir.file("missing.ndiv")), Error);
}

TEST_CASE("export_slice writes a P5 PGM") {
  TempDir dir;
  const Shape shape{3, 4, 5};
  const auto img = NdImage::f32(shape, oracle::random_values(shape, 3));
  io::export_slice(img, 0, 1, dir.file("s.pgm"));
  const auto bytes = slurp(dir.file("s.pgm"));
  REQUIRE(bytes.size() > 11);
  CHECK(bytes[0] == 'P');
  CHECK(bytes[1] == '5');
  // 4x5 slice -> header "P5\n5 4\n255\n" + 20 payload bytes
  CHECK(bytes.size() == 11 + 20);
}

TEST_CASE("generate_blobs is a pure function of its spec") {
  synth::SynthSpec spec;
  spec.shape = {24, 64, 64};
  spec.n_objects = 4;
  spec.radius_min = 4;
  spec.radius_max = 6;
  spec.seed = 11;

  const auto a = synth::generate_blobs(spec);
  const auto b = synth::generate_blobs(spec);
  CHECK(oracle::max_abs_diff(a.intensity.f32_values(),
                             b.intensity.f32_values()) == 0.0);
  const auto la = a.labels.values<std::uint32_t>();
  const auto lb = b.labels.values<std::uint32_t>();
  for (std::size_t i = 0; i < la.size(); ++i) CHECK(la[i] == lb[i]);
}

TEST_CASE("generate_blobs with zero objects is exactly zero") {
  synth::SynthSpec spec;
  spec.shape = {8, 16, 16};
  spec.n_objects = 0;
  spec.noise_sigma = 0.1;  // scaled by the (empty) clean range
  const auto v = synth::generate_blobs(spec);
  for (float x : v.intensity.f32_values()) CHECK(x == 0.0f);
  for (auto l : v.labels.values<std::uint32_t>()) CHECK(l == 0);
}

TEST_CASE("generate_blobs produces consecutive labels that self-match") {
  synth::SynthSpec spec;
  spec.shape = {32, 128, 128};
  spec.n_objects = 20;
  spec.radius_min = 6;
  spec.radius_max = 10;
  spec.seed = 5;

  const auto v = synth::generate_blobs(spec);
  const auto labels = v.labels.values<std::uint32_t>();
  std::uint32_t max_label = 0;
  std::set<std::uint32_t> seen;
  for (auto l : labels) {
    max_label = std::max(max_label, l);
    if (l) seen.insert(l);
  }
  CHECK(max_label == 20);
  CHECK(seen.size() == 20);
  CHECK(metrics::average_precision(v.labels, v.labels) == 1.0);
}

TEST_CASE("impossible placements raise PlacementFailure") {
  synth::SynthSpec spec;
  spec.shape = {10, 20, 20};
  spec.n_objects = 50;
  spec.radius_min = 3;
  spec.radius_max = 3;
  CHECK_THROWS_AS((void)synth::generate_blobs(spec), PlacementFailure);
}

TEST_CASE("gaussian_psf is normalized, centered and symmetric") {
  const Shape shape{5, 7, 7};
  const auto psf = synth::gaussian_psf(shape, {1.0, 1.5, 1.5});
  const auto v = psf.f32_values();

  double sum = 0;
  for (float x : v) {
    CHECK(x >= 0.0f);
    sum += x;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));

  // symmetry: psf[c+d] == psf[c-d]
  const auto s = psf.strides();
  const long cz = 2, cy = 3, cx = 3;
  for (long dz = -2; dz <= 2; ++dz)
    for (long dy = -3; dy <= 3; ++dy)
      for (long dx = -3; dx <= 3; ++dx) {
        const auto plus = v[(cz + dz) * s[0] + (cy + dy) * s[1] + (cx + dx)];
        const auto minus = v[(cz - dz) * s[0] + (cy - dy) * s[1] + (cx - dx)];
        CHECK(plus == doctest::Approx(minus).epsilon(1e-6));
      }

  // sigma -> 0 limit collapses to a one-hot at the center
  const auto delta = synth::gaussian_psf({3, 3, 3}, {1e-3, 1e-3, 1e-3});
  const auto dv = delta.f32_values();
  CHECK(dv[13] == doctest::Approx(1.0));
  CHECK(dv[0] == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)synth::gaussian_psf({4, 5, 5}, {1, 1, 1}), EvenExtent);
}

TEST_CASE("monolayer phantom provides co-registered channels and truth") {
  synth::SynthSpec spec;
  spec.shape = {24, 72, 72};
  spec.n_objects = 3;
  spec.radius_min = 5;
  spec.radius_max = 7;
  spec.seed = 2;

  const auto phantom = synth::generate_monolayer_phantom(spec);
  CHECK(phantom.membrane.shape() == spec.shape);
  CHECK(phantom.mitochondria.shape() == spec.shape);
  CHECK(phantom.dna.shape() == spec.shape);
  CHECK(phantom.nuclei.shape() == spec.shape);

  std::uint32_t max_label = 0;
  for (auto l : phantom.nuclei.values<std::uint32_t>())
    max_label = std::max(max_label, l);
  CHECK(max_label == 3);
}
