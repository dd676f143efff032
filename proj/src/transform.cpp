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

#include "voxelkit/transform.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "voxelkit/filters.hpp"
#include "voxelkit/parallel.hpp"
#include "voxelkit/registry.hpp"
#include "nd_utils.hpp"
#include "register_ops.hpp"

namespace voxelkit::transform {

namespace {

// Poles of the direct B-spline filter per order, after Unser.
std::vector<double> spline_poles(int order) {
  switch (order) {
    case 0:
    case 1:
      return {};
    case 2:
      return {std::sqrt(8.0) - 3.0};
    case 3:
      return {std::sqrt(3.0) - 2.0};
    case 4:
      return {std::sqrt(664.0 - std::sqrt(438976.0)) + std::sqrt(304.0) - 19.0,
              std::sqrt(664.0 + std::sqrt(438976.0)) - std::sqrt(304.0) - 19.0};
    case 5:
      return {std::sqrt(135.0 / 2.0 - std::sqrt(17745.0 / 4.0)) +
                  std::sqrt(105.0 / 4.0) - 13.0 / 2.0,
              std::sqrt(135.0 / 2.0 + std::sqrt(17745.0 / 4.0)) -
                  std::sqrt(105.0 / 4.0) - 13.0 / 2.0};
  }
  throw BadOrder("spline order must be in 0..5");
}

double causal_init_mirror(const double* c, long n, long stride, double z) {
  const double tol = 1e-12;
  long horizon = n;
  if (n > 16)
    horizon = std::min<long>(
        n, static_cast<long>(std::ceil(std::log(tol) / std::log(std::abs(z)))));
  if (horizon < n) {
    double zn = z, sum = c[0];
    for (long i = 1; i < horizon; ++i) {
      sum += zn * c[i * stride];
      zn *= z;
    }
    return sum;
  }
  double zn = z;
  const double iz = 1.0 / z;
  double z2n = std::pow(z, static_cast<double>(n - 1));
  double sum = c[0] + z2n * c[(n - 1) * stride];
  z2n *= z2n * iz;
  for (long i = 1; i <= n - 2; ++i) {
    sum += (zn + z2n) * c[i * stride];
    zn *= z;
    z2n *= iz;
  }
  return sum / (1.0 - zn * zn);
}

double anticausal_init_mirror(const double* c, long n, long stride, double z) {
  return (z / (z * z - 1.0)) * (z * c[(n - 2) * stride] + c[(n - 1) * stride]);
}

// In-place causal/anticausal recursive prefilter of one line (mirror
// boundary), turning samples into B-spline coefficients.
void prefilter_line(double* c, long n, long stride,
                    const std::vector<double>& poles) {
  if (n == 1) return;
  double gain = 1.0;
  for (double z : poles) gain *= (1.0 - z) * (1.0 - 1.0 / z);
  for (long i = 0; i < n; ++i) c[i * stride] *= gain;
  for (double z : poles) {
    c[0] = causal_init_mirror(c, n, stride, z);
    for (long i = 1; i < n; ++i) c[i * stride] += z * c[(i - 1) * stride];
    c[(n - 1) * stride] = anticausal_init_mirror(c, n, stride, z);
    for (long i = n - 2; i >= 0; --i)
      c[i * stride] = z * (c[(i + 1) * stride] - c[i * stride]);
  }
}

// Interpolation weights after Unser/Thevenaz; fills w[0..order] and returns
// the index of the first support node.
long spline_weights(int order, double x, double* w) {
  switch (order) {
    case 0: {
      w[0] = 1.0;
      return static_cast<long>(std::floor(x + 0.5));
    }
    case 1: {
      const long i = static_cast<long>(std::floor(x));
      const double f = x - i;
      w[0] = 1.0 - f;
      w[1] = f;
      return i;
    }
    case 2: {
      const long i = static_cast<long>(std::floor(x + 0.5));
      const double f = x - i;
      w[1] = 0.75 - f * f;
      w[2] = 0.5 * (f - w[1] + 1.0);
      w[0] = 1.0 - w[1] - w[2];
      return i - 1;
    }
    case 3: {
      const long i = static_cast<long>(std::floor(x));
      const double f = x - i;
      w[3] = (1.0 / 6.0) * f * f * f;
      w[0] = (1.0 / 6.0) + 0.5 * f * (f - 1.0) - w[3];
      w[2] = f + w[0] - 2.0 * w[3];
      w[1] = 1.0 - w[0] - w[2] - w[3];
      return i - 1;
    }
    case 4: {
      const long i = static_cast<long>(std::floor(x + 0.5));
      const double f = x - i;
      const double f2 = f * f;
      const double t = (1.0 / 6.0) * f2;
      w[0] = 0.5 - f;
      w[0] *= w[0];
      w[0] *= (1.0 / 24.0) * w[0];
      const double t0 = f * (t - 11.0 / 24.0);
      const double t1 = 19.0 / 96.0 + f2 * (0.25 - t);
      w[1] = t1 + t0;
      w[3] = t1 - t0;
      w[4] = w[0] + t0 + 0.5 * f;
      w[2] = 1.0 - w[0] - w[1] - w[3] - w[4];
      return i - 2;
    }
    case 5: {
      const long i = static_cast<long>(std::floor(x));
      double f = x - i;
      double f2 = f * f;
      w[5] = (1.0 / 120.0) * f * f2 * f2;
      f2 -= f;
      const double f4 = f2 * f2;
      f -= 0.5;
      const double t = f2 * (f2 - 3.0);
      w[0] = (1.0 / 24.0) * (1.0 / 5.0 + f2 + f4) - w[5];
      double t0 = (1.0 / 24.0) * (f2 * (f2 - 5.0) + 46.0 / 5.0);
      double t1 = (-1.0 / 12.0) * f * (t + 4.0);
      w[2] = t0 + t1;
      w[3] = t0 - t1;
      t0 = (1.0 / 16.0) * (9.0 / 5.0 - t);
      t1 = (1.0 / 24.0) * f * (f4 - f2 - 5.0);
      w[1] = t0 + t1;
      w[4] = t0 - t1;
      return i - 2;
    }
  }
  throw BadOrder("spline order must be in 0..5");
}

Shape output_shape(const Shape& in, const std::vector<double>& factors) {
  Shape out(in.size());
  for (std::size_t a = 0; a < in.size(); ++a)
    out[a] = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::llround(static_cast<double>(in[a]) * factors[a])));
  return out;
}

// Resamples one axis of a coefficient volume (double) at the given factor.
std::vector<double> resample_axis(const std::vector<double>& in, Shape& shape,
                                  std::size_t axis, std::size_t new_extent,
                                  double factor, int order, bool parallel) {
  Shape out_shape = shape;
  out_shape[axis] = new_extent;
  std::vector<double> out(shape_volume(out_shape));

  const auto in_strides = nd::row_major_strides(shape);
  const auto out_strides = nd::row_major_strides(out_shape);
  const long n = static_cast<long>(shape[axis]);
  const std::size_t lines = nd::line_count(shape, axis);

  // Weights depend only on the output position, so compute them once.
  std::vector<double> weights((order + 1) * new_extent);
  std::vector<long> firsts(new_extent);
  for (std::size_t o = 0; o < new_extent; ++o) {
    const double x = (static_cast<double>(o) + 0.5) / factor - 0.5;
    firsts[o] = spline_weights(order, x, &weights[(order + 1) * o]);
  }

  par::maybe_parallel(lines, parallel, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t line = lo; line < hi; ++line) {
      const std::size_t in_base = nd::line_base(shape, in_strides, axis, line);
      const std::size_t out_base =
          nd::line_base(out_shape, out_strides, axis, line);
      for (std::size_t o = 0; o < new_extent; ++o) {
        const double* w = &weights[(order + 1) * o];
        double acc = 0;
        for (int k = 0; k <= order; ++k)
          acc += w[k] * in[in_base +
                           nd::mirror_index(firsts[o] + k, n) * in_strides[axis]];
        out[out_base + o * out_strides[axis]] = acc;
      }
    }
  });
  shape = std::move(out_shape);
  return out;
}

// Order-0 gather that preserves the element kind (labels, masks, u16).
template <class T>
std::vector<T> nearest_gather(std::span<const T> in, const Shape& in_shape,
                              const Shape& out_shape,
                              const std::vector<double>& factors,
                              bool parallel) {
  const auto in_strides = nd::row_major_strides(in_shape);
  std::vector<T> out(shape_volume(out_shape));
  const std::size_t rank = in_shape.size();

  par::maybe_parallel(out.size(), parallel, [&](std::size_t lo, std::size_t hi) {
    std::vector<long> coords = nd::coords_at(out_shape, lo);
    for (std::size_t i = lo; i < hi; ++i) {
      std::size_t src = 0;
      for (std::size_t a = 0; a < rank; ++a) {
        const double x = (coords[a] + 0.5) / factors[a] - 0.5;
        const long idx = static_cast<long>(std::floor(x + 0.5));
        src += nd::mirror_index(idx, static_cast<long>(in_shape[a])) *
               in_strides[a];
      }
      out[i] = in[src];
      nd::advance_coords(coords, out_shape);
    }
  });
  return out;
}

NdImage rescale_impl(const NdImage& img, std::vector<double> factors,
                     int order, bool anti_aliasing, bool parallel) {
  if (order < 0 || order > 5) throw BadOrder("order must be in 0..5");
  if (factors.size() == 1 && img.rank() > 1)
    factors.resize(img.rank(), factors[0]);
  if (factors.size() != img.rank())
    throw ShapeMismatch("rescale: one factor per axis");
  for (double f : factors)
    if (!(f > 0)) throw NonPositiveFactor("rescale factors must be > 0");

  const Shape out_shape = output_shape(img.shape(), factors);

  std::optional<std::vector<double>> out_spacing;
  if (img.spacing()) {
    out_spacing.emplace(img.rank());
    for (std::size_t a = 0; a < img.rank(); ++a)
      (*out_spacing)[a] = (*img.spacing())[a] *
                          static_cast<double>(img.extent(a)) /
                          static_cast<double>(out_shape[a]);
  }

  // Discrete element kinds resample by nearest-neighbor gather only.
  if (img.elem() != Elem::f32 && order == 0 && !anti_aliasing) {
    NdImage out;
    switch (img.elem()) {
      case Elem::u16:
        out = NdImage::u16(out_shape,
                           nearest_gather(img.values<std::uint16_t>(),
                                          img.shape(), out_shape, factors,
                                          parallel));
        break;
      case Elem::u32_label:
        out = NdImage::labels(out_shape,
                              nearest_gather(img.values<std::uint32_t>(),
                                             img.shape(), out_shape, factors,
                                             parallel));
        break;
      case Elem::boolean:
        out = NdImage::boolean(out_shape,
                               nearest_gather(img.values<std::uint8_t>(),
                                              img.shape(), out_shape, factors,
                                              parallel));
        break;
      default: break;
    }
    if (out_spacing) out = out.with_spacing(*out_spacing);
    return out.with_backend(img.backend());
  }

  NdImage src = img.as_f32();
  if (anti_aliasing) {
    std::vector<double> sigma(img.rank(), 0.0);
    bool any = false;
    for (std::size_t a = 0; a < img.rank(); ++a) {
      if (factors[a] < 1.0) {
        sigma[a] = std::max(0.0, (1.0 / factors[a] - 1.0) / 2.0);
        any = any || sigma[a] > 0;
      }
    }
    if (any) src = filters::gaussian(src, sigma);
  }

  // Order 0 on f32 keeps the pure-gather path (bitwise round trips).
  if (order == 0) {
    NdImage out = NdImage::f32(
        out_shape, nearest_gather(src.f32_values(), src.shape(), out_shape,
                                  factors, parallel));
    if (out_spacing) out = out.with_spacing(*out_spacing);
    return out.with_backend(img.backend());
  }

  const auto v = src.f32_values();
  std::vector<double> coeff(v.begin(), v.end());
  Shape shape = src.shape();

  if (order >= 2) {
    const auto poles = spline_poles(order);
    const auto strides = nd::row_major_strides(shape);
    for (std::size_t axis = 0; axis < shape.size(); ++axis) {
      const std::size_t lines = nd::line_count(shape, axis);
      const long n = static_cast<long>(shape[axis]);
      const long stride = static_cast<long>(strides[axis]);
      par::maybe_parallel(lines, parallel, [&, axis](std::size_t lo,
                                                     std::size_t hi) {
        for (std::size_t line = lo; line < hi; ++line) {
          const std::size_t base = nd::line_base(shape, strides, axis, line);
          prefilter_line(&coeff[base], n, stride, poles);
        }
      });
    }
  }

  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    // Orders >= 2 must resample even at factor 1: the interpolation pass is
    // what maps prefiltered coefficients back to sample values.
    if (order <= 1 && out_shape[axis] == shape[axis] && factors[axis] == 1.0)
      continue;
    coeff = resample_axis(coeff, shape, axis, out_shape[axis], factors[axis],
                          order, parallel);
  }

  std::vector<float> out(coeff.size());
  for (std::size_t i = 0; i < coeff.size(); ++i)
    out[i] = static_cast<float>(coeff[i]);
  NdImage result = NdImage::f32(out_shape, std::move(out));
  if (out_spacing) result = result.with_spacing(*out_spacing);
  return result.with_backend(img.backend());
}

}  // namespace

NdImage rescale(const NdImage& img, std::vector<double> factors, int order,
                bool anti_aliasing) {
  return dispatch<NdImage(const NdImage&, std::vector<double>, int, bool)>(
      "rescale", img, std::move(factors), order, anti_aliasing);
}

NdImage rescale(const NdImage& img, double factor, int order,
                bool anti_aliasing) {
  return rescale(img, std::vector<double>(img.rank(), factor), order,
                 anti_aliasing);
}

NdImage upscale2x_downscale(const NdImage& img, int order) {
  const NdImage up = rescale(img, 2.0, order, false);
  return rescale(up, 0.5, order, true);
}

}  // namespace voxelkit::transform

namespace voxelkit::detail {

void register_transform_ops(ExecutionRegistry& reg) {
  using Sig = NdImage(const NdImage&, std::vector<double>, int, bool);
  reg.add<Sig>("rescale", BackendId::reference,
               [](const NdImage& img, std::vector<double> f, int order, bool aa) {
                 return transform::rescale_impl(img, std::move(f), order, aa, false);
               });
  reg.add<Sig>("rescale", BackendId::accelerated,
               [](const NdImage& img, std::vector<double> f, int order, bool aa) {
                 return transform::rescale_impl(img, std::move(f), order, aa, true);
               });
}

}  // namespace voxelkit::detail
