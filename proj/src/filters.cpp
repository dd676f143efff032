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

#include "voxelkit/filters.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "voxelkit/parallel.hpp"
#include "voxelkit/registry.hpp"
#include "fft_plan.hpp"
#include "nd_utils.hpp"
#include "register_ops.hpp"

namespace voxelkit {

StructuringElement StructuringElement::ball(double radius, std::size_t rank) {
  StructuringElement se;
  se.radius = radius;
  se.rank = rank;
  const long r = static_cast<long>(std::floor(radius));
  std::vector<long> off(rank, -r);
  while (true) {
    double d2 = 0;
    for (long o : off) d2 += static_cast<double>(o) * o;
    if (d2 <= radius * radius) se.offsets.push_back(off);
    std::size_t a = rank;
    bool done = true;
    while (a-- > 0) {
      if (++off[a] <= r) {
        done = false;
        break;
      }
      off[a] = -r;
    }
    if (done) break;
  }
  // near offsets first: scans that can stop early (seed detection) bail out
  // sooner, and results never depend on the order
  std::sort(se.offsets.begin(), se.offsets.end(),
            [](const std::vector<long>& a, const std::vector<long>& b) {
              double da = 0, db = 0;
              for (long o : a) da += static_cast<double>(o) * o;
              for (long o : b) db += static_cast<double>(o) * o;
              if (da != db) return da < db;
              return a < b;
            });
  return se;
}

StructuringElement StructuringElement::plane_disk(double radius) {
  StructuringElement disk = ball(radius, 2);
  StructuringElement se;
  se.radius = radius;
  se.rank = 3;
  for (auto& off : disk.offsets) se.offsets.push_back({0, off[0], off[1]});
  return se;
}

namespace filters {

namespace {

std::vector<double> gaussian_kernel_1d(double sigma, double truncate) {
  const long half = static_cast<long>(std::ceil(truncate * sigma));
  std::vector<double> w(2 * half + 1);
  double sum = 0;
  for (long i = -half; i <= half; ++i) {
    const double v = std::exp(-0.5 * (i / sigma) * (i / sigma));
    w[i + half] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

// One separable pass along `axis`, mirror boundary, double accumulation.
void convolve_axis(const std::vector<double>& in, std::vector<double>& out,
                   const Shape& shape, std::size_t axis,
                   const std::vector<double>& kernel, bool parallel) {
  const auto strides = nd::row_major_strides(shape);
  const long n = static_cast<long>(shape[axis]);
  const std::size_t stride = strides[axis];
  const long half = static_cast<long>(kernel.size() / 2);
  const std::size_t lines = nd::line_count(shape, axis);

  par::maybe_parallel(lines, parallel, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> scratch(n);
    for (std::size_t line = lo; line < hi; ++line) {
      const std::size_t base = nd::line_base(shape, strides, axis, line);
      for (long i = 0; i < n; ++i) scratch[i] = in[base + i * stride];
      for (long i = 0; i < n; ++i) {
        double acc = 0;
        for (long k = -half; k <= half; ++k)
          acc += kernel[k + half] * scratch[nd::mirror_index(i + k, n)];
        out[base + i * stride] = acc;
      }
    }
  });
}

NdImage gaussian_impl(const NdImage& img, std::vector<double> sigma,
                      double truncate, bool parallel) {
  if (sigma.size() == 1 && img.rank() > 1) sigma.resize(img.rank(), sigma[0]);
  if (sigma.size() != img.rank())
    throw ShapeMismatch("gaussian: one sigma per axis");
  for (double s : sigma)
    if (s < 0) throw Error("gaussian: sigma must be >= 0");

  const NdImage src = img.as_f32();
  const auto v = src.f32_values();
  std::vector<double> cur(v.begin(), v.end());
  std::vector<double> next(cur.size());
  for (std::size_t axis = 0; axis < img.rank(); ++axis) {
    if (sigma[axis] == 0) continue;
    convolve_axis(cur, next, src.shape(), axis,
                  gaussian_kernel_1d(sigma[axis], truncate), parallel);
    cur.swap(next);
  }
  std::vector<float> out(cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i)
    out[i] = static_cast<float>(cur[i]);
  return NdImage::f32_like(src, std::move(out));
}

NdImage median_impl(const NdImage& img, const StructuringElement& se,
                    bool parallel) {
  if (se.rank != img.rank())
    throw ShapeMismatch("median: structuring element rank mismatch");
  const NdImage src = img.as_f32();
  const auto v = src.f32_values();
  const Shape& shape = src.shape();
  const auto packed = nd::pack_se(se, shape);
  const std::size_t n = v.size();
  std::vector<float> out(n);

  par::maybe_parallel(n, parallel, [&](std::size_t lo, std::size_t hi) {
    std::vector<float> neigh;
    neigh.reserve(packed.linear.size());
    std::vector<long> coords = nd::coords_at(shape, lo);
    for (std::size_t i = lo; i < hi; ++i) {
      neigh.clear();
      for (std::size_t k = 0; k < packed.linear.size(); ++k) {
        if (nd::offset_in_bounds(coords, packed.coords[k], shape))
          neigh.push_back(v[i + packed.linear[k]]);
      }
      const std::size_t mid = (neigh.size() - 1) / 2;
      std::nth_element(neigh.begin(), neigh.begin() + mid, neigh.end());
      out[i] = neigh[mid];
      nd::advance_coords(coords, shape);
    }
  });
  return NdImage::f32_like(src, std::move(out));
}

// Kernel center per axis; the same-size crop and the direct-convolution
// oracle share this convention.
inline std::size_t kernel_center(std::size_t extent) { return (extent - 1) / 2; }

NdImage fft_convolve_impl(const NdImage& img, const NdImage& kernel,
                          bool circular, bool parallel) {
  if (img.rank() != kernel.rank())
    throw ShapeMismatch("fft_convolve: rank mismatch");
  const NdImage a = img.as_f32();
  const NdImage k = kernel.as_f32();
  const Shape& ashape = a.shape();
  const Shape& kshape = k.shape();

  Shape padded(ashape.size());
  if (circular) {
    for (std::size_t i = 0; i < ashape.size(); ++i) {
      if (kshape[i] > ashape[i])
        throw KernelTooLarge("circular convolution needs kernel <= image");
      padded[i] = ashape[i];
    }
  } else {
    for (std::size_t i = 0; i < ashape.size(); ++i)
      padded[i] = fftx::good_size(ashape[i] + kshape[i] - 1);
  }

  const int threads = parallel ? par::max_threads() : 1;
  fftx::RealFft fft(padded, threads);
  const std::size_t pn = fft.real_count();
  const std::size_t cn = fft.complex_count();
  const auto pstrides = nd::row_major_strides(padded);

  // Image at the origin corner of the padded volume.
  std::vector<double> buf(pn, 0.0);
  {
    const auto av = a.f32_values();
    std::vector<long> coords(ashape.size(), 0);
    for (std::size_t i = 0; i < av.size(); ++i) {
      std::size_t dst = 0;
      for (std::size_t ax = 0; ax < ashape.size(); ++ax)
        dst += static_cast<std::size_t>(coords[ax]) * pstrides[ax];
      buf[dst] = av[i];
      nd::advance_coords(coords, ashape);
    }
  }
  std::vector<std::complex<double>> spec_img(cn);
  fft.forward(buf, spec_img);

  // Kernel: circular mode wraps it so its center sits at index 0; linear
  // mode places it at the corner and the final crop accounts for the center.
  std::fill(buf.begin(), buf.end(), 0.0);
  {
    const auto kv = k.f32_values();
    std::vector<long> coords(kshape.size(), 0);
    for (std::size_t i = 0; i < kv.size(); ++i) {
      std::size_t dst = 0;
      for (std::size_t ax = 0; ax < kshape.size(); ++ax) {
        long pos = coords[ax];
        if (circular) {
          pos -= static_cast<long>(kernel_center(kshape[ax]));
          const long p = static_cast<long>(padded[ax]);
          pos = ((pos % p) + p) % p;
        }
        dst += static_cast<std::size_t>(pos) * pstrides[ax];
      }
      buf[dst] = kv[i];
      nd::advance_coords(coords, kshape);
    }
  }
  std::vector<std::complex<double>> spec_k(cn);
  fft.forward(buf, spec_k);

  par::maybe_parallel(cn, parallel, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) spec_img[i] *= spec_k[i];
  });
  fft.inverse(spec_img, buf);

  // Crop the centered same-size result.
  std::vector<float> out(a.size());
  std::vector<std::size_t> start(ashape.size(), 0);
  if (!circular)
    for (std::size_t ax = 0; ax < ashape.size(); ++ax)
      start[ax] = kernel_center(kshape[ax]);
  {
    std::vector<long> coords(ashape.size(), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::size_t src = 0;
      for (std::size_t ax = 0; ax < ashape.size(); ++ax)
        src += (static_cast<std::size_t>(coords[ax]) + start[ax]) * pstrides[ax];
      out[i] = static_cast<float>(buf[src]);
      nd::advance_coords(coords, ashape);
    }
  }
  return NdImage::f32_like(a, std::move(out));
}

}  // namespace

NdImage gaussian(const NdImage& img, std::vector<double> sigma,
                 double truncate) {
  return dispatch<NdImage(const NdImage&, std::vector<double>, double)>(
      "gaussian", img, std::move(sigma), truncate);
}

NdImage gaussian(const NdImage& img, double sigma, double truncate) {
  return gaussian(img, std::vector<double>(img.rank(), sigma), truncate);
}

NdImage median(const NdImage& img, const StructuringElement& se) {
  return dispatch<NdImage(const NdImage&, const StructuringElement&)>(
      "median", img, se);
}

NdImage fft_convolve(const NdImage& img, const NdImage& kernel,
                     bool circular) {
  return dispatch<NdImage(const NdImage&, const NdImage&, bool)>(
      "fft_convolve", img, kernel, circular);
}

}  // namespace filters

namespace detail {

void register_filter_ops(ExecutionRegistry& reg) {
  using GaussSig = NdImage(const NdImage&, std::vector<double>, double);
  using MedianSig = NdImage(const NdImage&, const StructuringElement&);
  using ConvSig = NdImage(const NdImage&, const NdImage&, bool);

  reg.add<GaussSig>(
      "gaussian", BackendId::reference,
      [](const NdImage& img, std::vector<double> sigma, double t) {
        return filters::gaussian_impl(img, std::move(sigma), t, false);
      });
  reg.add<GaussSig>(
      "gaussian", BackendId::accelerated,
      [](const NdImage& img, std::vector<double> sigma, double t) {
        return filters::gaussian_impl(img, std::move(sigma), t, true);
      });
  reg.add<MedianSig>("median", BackendId::reference,
                     [](const NdImage& img, const StructuringElement& se) {
                       return filters::median_impl(img, se, false);
                     });
  reg.add<MedianSig>("median", BackendId::accelerated,
                     [](const NdImage& img, const StructuringElement& se) {
                       return filters::median_impl(img, se, true);
                     });
  reg.add<ConvSig>("fft_convolve", BackendId::reference,
                   [](const NdImage& img, const NdImage& k, bool circular) {
                     return filters::fft_convolve_impl(img, k, circular, false);
                   });
  reg.add<ConvSig>("fft_convolve", BackendId::accelerated,
                   [](const NdImage& img, const NdImage& k, bool circular) {
                     return filters::fft_convolve_impl(img, k, circular, true);
                   });
}

}  // namespace detail

}  // namespace voxelkit
