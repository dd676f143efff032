/**
 * @license
 * Copyright 2026 VoxelKit Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "voxelkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nd_utils.hpp"

namespace voxelkit::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

// mt19937_64 with hand-rolled draws; std::*_distribution output is
// implementation-defined, which would break identical-seed reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Blob {
  double center[3];
  double semi[3];  // z, y, x semi-axes in voxels
  double radius;   // in-plane radius
};

// Normalized ellipsoid distance: 1.0 on the boundary.
inline double rho(const Blob& b, long z, long y, long x) {
  const double dz = (z - b.center[0]) / b.semi[0];
  const double dy = (y - b.center[1]) / b.semi[1];
  const double dx = (x - b.center[2]) / b.semi[2];
  return std::sqrt(dz * dz + dy * dy + dx * dx);
}

std::vector<Blob> place_blobs(const SynthSpec& spec, Rng& rng) {
  if (spec.shape.size() != 3)
    throw Error("generate_blobs expects a 3D ZYX shape");
  if (!(spec.radius_min > 0) || spec.radius_max < spec.radius_min)
    throw Error("radius range must be positive and ordered");
  if (!(spec.anisotropy > 0)) throw Error("anisotropy must be positive");

  std::vector<Blob> blobs;
  const int max_attempts = 200;
  for (std::size_t i = 0; i < spec.n_objects; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      Blob b;
      b.radius = rng.uniform(spec.radius_min, spec.radius_max);
      b.semi[0] = b.radius / spec.anisotropy;
      b.semi[1] = b.radius;
      b.semi[2] = b.radius;
      bool fits = true;
      for (int a = 0; a < 3; ++a) {
        double margin = b.semi[a] + 3.0;  // ellipsoid + taper + gap
        if (a > 0) margin += spec.inplane_margin;
        const double hi = static_cast<double>(spec.shape[a]) - 1.0 - margin;
        if (hi < margin) {
          fits = false;
          break;
        }
        b.center[a] = rng.uniform(margin, hi);
      }
      if (!fits)
        throw PlacementFailure("objects of this size cannot fit the volume");

      const double reach = std::max(b.semi[0], b.radius) + 1.0;
      bool overlaps = false;
      for (const Blob& other : blobs) {
        const double other_reach =
            std::max(other.semi[0], other.radius) + 1.0;
        double d2 = 0;
        for (int a = 0; a < 3; ++a) {
          const double d = b.center[a] - other.center[a];
          d2 += d * d;
        }
        const double min_dist = reach + other_reach + 2.0;
        if (d2 < min_dist * min_dist) {
          overlaps = true;
          break;
        }
      }
      if (!overlaps) {
        blobs.push_back(b);
        placed = true;
      }
    }
    if (!placed)
      throw PlacementFailure("could not place object " + std::to_string(i + 1) +
                             " without overlap");
  }
  return blobs;
}

// Rasterizes f(rho) into `img` over the blob's bounding box, scaled by
// `extent` (outermost rho that contributes), combining with max.
template <class F>
void rasterize(std::vector<float>& img, const Shape& shape, const Blob& b,
               double extent, F&& f) {
  const auto strides = nd::row_major_strides(shape);
  long lo[3], hi[3];
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::max<long>(
        0, static_cast<long>(std::floor(b.center[a] - b.semi[a] * extent - 1)));
    hi[a] = std::min<long>(
        static_cast<long>(shape[a]) - 1,
        static_cast<long>(std::ceil(b.center[a] + b.semi[a] * extent + 1)));
  }
  for (long z = lo[0]; z <= hi[0]; ++z)
    for (long y = lo[1]; y <= hi[1]; ++y)
      for (long x = lo[2]; x <= hi[2]; ++x) {
        const double r = rho(b, z, y, x);
        if (r > extent) continue;
        const float v = static_cast<float>(f(r));
        float& dst = img[z * strides[0] + y * strides[1] + x * strides[2]];
        dst = std::max(dst, v);
      }
}

void label_blob(std::vector<std::uint32_t>& labels, const Shape& shape,
                const Blob& b, std::uint32_t id) {
  const auto strides = nd::row_major_strides(shape);
  long lo[3], hi[3];
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::max<long>(
        0, static_cast<long>(std::floor(b.center[a] - b.semi[a] - 1)));
    hi[a] = std::min<long>(
        static_cast<long>(shape[a]) - 1,
        static_cast<long>(std::ceil(b.center[a] + b.semi[a] + 1)));
  }
  for (long z = lo[0]; z <= hi[0]; ++z)
    for (long y = lo[1]; y <= hi[1]; ++y)
      for (long x = lo[2]; x <= hi[2]; ++x)
        if (rho(b, z, y, x) <= 1.0)
          labels[z * strides[0] + y * strides[1] + x * strides[2]] = id;
}

// Soft edge: 1 inside, cosine taper to 0 across a 2-voxel band centered on
// the label boundary.
inline double soft_profile(double r, double radius) {
  const double half_band = 1.0 / radius;  // 1 voxel in rho units
  if (r <= 1.0 - half_band) return 1.0;
  if (r >= 1.0 + half_band) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * (r - (1.0 - half_band)) / (2 * half_band)));
}

void add_noise(std::vector<float>& img, double sigma, Rng& rng) {
  if (sigma <= 0) return;
  for (float& v : img) v += static_cast<float>(sigma * rng.normal());
}

std::vector<double> blob_spacing(const SynthSpec& spec) {
  return {spec.anisotropy, 1.0, 1.0};
}

}  // namespace

BlobVolume generate_blobs(const SynthSpec& spec) {
  Rng rng(spec.seed);
  const auto blobs = place_blobs(spec, rng);
  const std::size_t n = shape_volume(spec.shape);

  std::vector<float> intensity(n, 0.0f);
  std::vector<std::uint32_t> labels(n, 0);
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const Blob& b = blobs[i];
    rasterize(intensity, spec.shape, b, 1.0 + 1.0 / b.radius,
              [&](double r) { return soft_profile(r, b.radius); });
    label_blob(labels, spec.shape, b, static_cast<std::uint32_t>(i + 1));
  }

  // noise_sigma is a fraction of the clean dynamic range, so an empty spec
  // stays exactly zero.
  const double range = blobs.empty() ? 0.0 : 1.0;
  add_noise(intensity, spec.noise_sigma * range, rng);

  BlobVolume out;
  out.intensity =
      NdImage::f32(spec.shape, std::move(intensity)).with_spacing(blob_spacing(spec));
  out.labels =
      NdImage::labels(spec.shape, std::move(labels)).with_spacing(blob_spacing(spec));
  return out;
}

NdImage gaussian_psf(const Shape& shape, std::vector<double> sigmas) {
  if (sigmas.size() == 1 && shape.size() > 1)
    sigmas.resize(shape.size(), sigmas[0]);
  if (sigmas.size() != shape.size())
    throw ShapeMismatch("gaussian_psf: one sigma per axis");
  for (std::size_t e : shape)
    if (e % 2 == 0)
      throw EvenExtent("gaussian_psf needs odd extents, got " +
                       shape_to_string(shape));

  const std::size_t n = shape_volume(shape);
  std::vector<double> vals(n);
  std::vector<long> coords(shape.size(), 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 1.0;
    for (std::size_t a = 0; a < shape.size(); ++a) {
      const double d = coords[a] - static_cast<double>(shape[a] / 2);
      if (sigmas[a] <= 0.0) {
        v *= (d == 0.0) ? 1.0 : 0.0;
      } else {
        v *= std::exp(-0.5 * (d / sigmas[a]) * (d / sigmas[a]));
      }
    }
    vals[i] = v;
    sum += v;
    nd::advance_coords(coords, shape);
  }
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<float>(vals[i] / sum);
  return NdImage::f32(shape, std::move(out));
}

MonolayerPhantom generate_monolayer_phantom(const SynthSpec& spec) {
  Rng rng(spec.seed);
  const auto blobs = place_blobs(spec, rng);
  const std::size_t n = shape_volume(spec.shape);

  std::vector<float> dna(n, 0.0f), membrane(n, 0.0f), mito(n, 0.0f);
  std::vector<std::uint32_t> labels(n, 0);
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const Blob& b = blobs[i];
    rasterize(dna, spec.shape, b, 1.0 + 1.0 / b.radius,
              [&](double r) { return soft_profile(r, b.radius); });
    label_blob(labels, spec.shape, b, static_cast<std::uint32_t>(i + 1));

    // Membrane: a bright shell just outside the nucleus.
    const double shell_in = 1.0 + 0.5 / b.radius;
    const double shell_out = 1.0 + 2.5 / b.radius;
    rasterize(membrane, spec.shape, b, shell_out, [&](double r) {
      return (r >= shell_in && r <= shell_out) ? 1.0 : 0.0;
    });

    // Mitochondria: diffuse signal filling the cell body.
    rasterize(mito, spec.shape, b, 1.9, [&](double r) {
      return 0.6 * std::max(0.0, 1.0 - r / 1.9);
    });
  }

  const double range = blobs.empty() ? 0.0 : 1.0;
  add_noise(dna, spec.noise_sigma * range, rng);
  add_noise(membrane, spec.noise_sigma * range, rng);
  add_noise(mito, spec.noise_sigma * range, rng);

  const auto spacing = blob_spacing(spec);
  MonolayerPhantom out;
  out.dna = NdImage::f32(spec.shape, std::move(dna)).with_spacing(spacing);
  out.membrane =
      NdImage::f32(spec.shape, std::move(membrane)).with_spacing(spacing);
  out.mitochondria =
      NdImage::f32(spec.shape, std::move(mito)).with_spacing(spacing);
  out.nuclei =
      NdImage::labels(spec.shape, std::move(labels)).with_spacing(spacing);
  return out;
}

}  // namespace voxelkit::synth
