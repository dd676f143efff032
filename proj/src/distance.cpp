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

#include <cmath>
#include <limits>
#include <vector>

#include "voxelkit/parallel.hpp"
#include "voxelkit/registry.hpp"
#include "voxelkit/segmentation.hpp"
#include "nd_utils.hpp"
#include "register_ops.hpp"

namespace voxelkit::seg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Felzenszwalb-Huttenlocher lower envelope of parabolas for one contiguous
// line: d(p) = min over finite-f sites q of (p - q)^2 s^2 + f(q).
void envelope_1d(const double* f, double* d, long n, double s,
                 std::vector<long>& v, std::vector<double>& z) {
  v.clear();
  z.clear();
  const double s2 = s * s;
  for (long q = 0; q < n; ++q) {
    const double fq = f[q];
    if (fq == kInf) continue;
    if (v.empty()) {
      v.push_back(q);
      z.push_back(-kInf);
      continue;
    }
    while (true) {
      const long p = v.back();
      const double cut =
          ((fq + s2 * q * q) - (f[p] + s2 * p * p)) / (2.0 * s2 * (q - p));
      if (cut <= z.back()) {
        v.pop_back();
        z.pop_back();
      } else {
        v.push_back(q);
        z.push_back(cut);
        break;
      }
    }
  }
  if (v.empty()) {
    for (long p = 0; p < n; ++p) d[p] = kInf;
    return;
  }
  z.push_back(kInf);

  std::size_t k = 0;
  for (long p = 0; p < n; ++p) {
    while (z[k + 1] < p) ++k;
    const long q = v[k];
    d[p] = s2 * (p - q) * (p - q) + f[q];
  }
}

// First axis on the binary mask: two-scan nearest-background distance along
// the line, then squared.
void binary_pass_1d(const std::uint8_t* m, double* d, long n, long stride,
                    double s) {
  double run = m[0] ? kInf : 0.0;
  d[0] = run;
  for (long i = 1; i < n; ++i) {
    run = m[i * stride] ? run + s : 0.0;
    d[i * stride] = run;
  }
  run = d[(n - 1) * stride];
  for (long i = n - 2; i >= 0; --i) {
    run = std::min(d[i * stride], run + s);
    d[i * stride] = run;
  }
  for (long i = 0; i < n; ++i) d[i * stride] *= d[i * stride];
}

NdImage distance_kernel(const NdImage& mask, bool parallel) {
  if (mask.elem() != Elem::boolean)
    throw ShapeMismatch("distance_transform expects a bool mask");
  const auto m = mask.values<std::uint8_t>();
  const Shape& shape = mask.shape();
  const auto strides = nd::row_major_strides(shape);

  std::vector<double> spacing(shape.size(), 1.0);
  if (mask.spacing()) spacing = *mask.spacing();

  std::vector<double> dist(m.size());
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const std::size_t lines = nd::line_count(shape, axis);
    const long n = static_cast<long>(shape[axis]);
    const long stride = static_cast<long>(strides[axis]);
    const double s = spacing[axis];
    par::maybe_parallel(
        lines, parallel, [&, axis, n, stride, s](std::size_t lo, std::size_t hi) {
          std::vector<long> v;
          std::vector<double> z, f(n), d(n);
          for (std::size_t line = lo; line < hi; ++line) {
            const std::size_t base = nd::line_base(shape, strides, axis, line);
            if (axis == 0) {
              binary_pass_1d(&m[base], &dist[base], n, stride, s);
            } else {
              for (long i = 0; i < n; ++i) f[i] = dist[base + i * stride];
              envelope_1d(f.data(), d.data(), n, s, v, z);
              for (long i = 0; i < n; ++i) dist[base + i * stride] = d[i];
            }
          }
        });
  }

  std::vector<float> out(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i)
    out[i] = static_cast<float>(std::sqrt(dist[i]));
  return NdImage::f32_like(mask, std::move(out));
}

}  // namespace

NdImage distance_transform(const NdImage& mask) {
  return dispatch<NdImage(const NdImage&)>("distance_transform", mask);
}

namespace detail {

void register_distance_op(ExecutionRegistry& reg) {
  using Sig = NdImage(const NdImage&);
  reg.add<Sig>("distance_transform", BackendId::reference,
               [](const NdImage& m) { return distance_kernel(m, false); });
  reg.add<Sig>("distance_transform", BackendId::accelerated,
               [](const NdImage& m) { return distance_kernel(m, true); });
}

}  // namespace detail

}  // namespace voxelkit::seg
