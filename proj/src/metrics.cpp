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

#include "voxelkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <unordered_map>
#include <vector>

#include "voxelkit/filters.hpp"
#include "fft_plan.hpp"
#include "nd_utils.hpp"

namespace voxelkit::metrics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double range_of(std::span<const float> v) {
  float mn = v[0], mx = v[0];
  for (float x : v) {
    mn = std::min(mn, x);
    mx = std::max(mx, x);
  }
  return static_cast<double>(mx) - mn;
}

double mse(std::span<const float> a, std::span<const float> b) {
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

}  // namespace

double psnr(const NdImage& x, const NdImage& ref,
            std::optional<double> data_range) {
  require_same_shape(x, ref, "psnr");
  const NdImage fx = x.as_f32(), fr = ref.as_f32();
  const auto vx = fx.f32_values(), vr = fr.f32_values();
  const double err = mse(vx, vr);
  if (err == 0.0) return kInf;
  const double range = data_range ? *data_range : range_of(vr);
  return 10.0 * std::log10(range * range / err);
}

double si_psnr(const NdImage& x, const NdImage& ref) {
  require_same_shape(x, ref, "si_psnr");
  const NdImage fx = x.as_f32(), fr = ref.as_f32();
  const auto vx = fx.f32_values(), vr = fr.f32_values();
  const double n = static_cast<double>(vx.size());

  double sx = 0, sr = 0, sxx = 0, sxr = 0, srr = 0;
  for (std::size_t i = 0; i < vx.size(); ++i) {
    const double a = vx[i], b = vr[i];
    sx += a;
    sr += b;
    sxx += a * a;
    sxr += a * b;
    srr += b * b;
  }
  const double var_r = srr / n - (sr / n) * (sr / n);
  if (var_r <= 0.0)
    throw DegenerateReference("si_psnr needs a non-constant reference");
  const double var_x = sxx / n - (sx / n) * (sx / n);

  // Least-squares a*x + b against ref (normal equations).
  double a = 0.0;
  if (var_x > 0.0) a = (sxr / n - (sx / n) * (sr / n)) / var_x;
  const double b = sr / n - a * (sx / n);

  double err = 0;
  for (std::size_t i = 0; i < vx.size(); ++i) {
    const double d = a * vx[i] + b - vr[i];
    err += d * d;
  }
  err /= n;
  if (err <= 0.0) return kInf;
  const double range = range_of(vr);
  return 10.0 * std::log10(range * range / err);
}

double ssim(const NdImage& x, const NdImage& ref,
            std::optional<double> data_range) {
  require_same_shape(x, ref, "ssim");
  for (std::size_t e : x.shape())
    if (e < 7) throw TooSmall("ssim needs every extent >= 7");
  const NdImage fx = x.as_f32(), fr = ref.as_f32();

  const double range = data_range ? *data_range : range_of(fr.f32_values());
  const double c1 = (0.01 * range) * (0.01 * range);
  const double c2 = (0.03 * range) * (0.03 * range);

  // Windowed moments through the shared Gaussian filter (sigma 1.5,
  // truncate 3.5), mirror boundary.
  const double sigma = 1.5, truncate = 3.5;
  auto smooth = [&](const NdImage& img) {
    return filters::gaussian(img, std::vector<double>(img.rank(), sigma),
                             truncate);
  };
  const auto vx = fx.f32_values(), vr = fr.f32_values();
  std::vector<float> xx(vx.size()), rr(vx.size()), xr(vx.size());
  for (std::size_t i = 0; i < vx.size(); ++i) {
    xx[i] = vx[i] * vx[i];
    rr[i] = vr[i] * vr[i];
    xr[i] = vx[i] * vr[i];
  }
  const auto mu_x = smooth(fx).f32_values();
  const auto mu_r = smooth(fr).f32_values();
  const auto m_xx = smooth(NdImage::f32_like(fx, std::move(xx))).f32_values();
  const auto m_rr = smooth(NdImage::f32_like(fx, std::move(rr))).f32_values();
  const auto m_xr = smooth(NdImage::f32_like(fx, std::move(xr))).f32_values();

  double acc = 0;
  for (std::size_t i = 0; i < vx.size(); ++i) {
    const double mx = mu_x[i], mr = mu_r[i];
    const double var_x = m_xx[i] - mx * mx;
    const double var_r = m_rr[i] - mr * mr;
    const double cov = m_xr[i] - mx * mr;
    acc += ((2 * mx * mr + c1) * (2 * cov + c2)) /
           ((mx * mx + mr * mr + c1) * (var_x + var_r + c2));
  }
  return acc / static_cast<double>(vx.size());
}

FrcCurve frc(const NdImage& a, const NdImage& b, double ring_width) {
  require_same_shape(a, b, "frc");
  if (a.rank() != 2 && a.rank() != 3)
    throw ShapeMismatch("frc expects 2D or 3D images");
  const NdImage fa = a.as_f32(), fb = b.as_f32();
  const Shape& shape = fa.shape();

  fftx::RealFft fft(shape, 1);
  const std::size_t cn = fft.complex_count();
  std::vector<std::complex<double>> sa(cn), sb(cn);
  {
    const auto va = fa.f32_values(), vb = fb.f32_values();
    std::vector<double> buf(va.size());
    for (std::size_t i = 0; i < va.size(); ++i) buf[i] = va[i];
    fft.forward(buf, sa);
    for (std::size_t i = 0; i < vb.size(); ++i) buf[i] = vb[i];
    fft.forward(buf, sb);
  }

  const Shape spec_shape = fft.spectrum_shape();
  const std::size_t n_max = *std::max_element(shape.begin(), shape.end());
  const double bin_freq = ring_width / static_cast<double>(n_max);
  const std::size_t n_bins =
      static_cast<std::size_t>(std::floor(0.5 / bin_freq)) + 1;

  std::vector<double> num(n_bins, 0), den_a(n_bins, 0), den_b(n_bins, 0);
  std::vector<std::size_t> counts(n_bins, 0);

  std::vector<long> coords(spec_shape.size(), 0);
  const std::size_t last = shape.size() - 1;
  for (std::size_t i = 0; i < cn; ++i) {
    double nu2 = 0;
    for (std::size_t ax = 0; ax < shape.size(); ++ax) {
      const std::size_t k = static_cast<std::size_t>(coords[ax]);
      const std::size_t folded = std::min(k, shape[ax] - k);
      const double f = static_cast<double>(folded) / shape[ax];
      nu2 += f * f;
    }
    const double nu = std::sqrt(nu2);
    const std::size_t bin =
        static_cast<std::size_t>(std::llround(nu / bin_freq));
    if (bin < n_bins) {
      // Hermitian half-spectrum: interior kx planes stand for a conjugate
      // pair; Re and |.|^2 are conjugation-invariant, so weight 2.
      const std::size_t kx = static_cast<std::size_t>(coords[last]);
      const bool self_conjugate =
          kx == 0 || (shape[last] % 2 == 0 && kx == shape[last] / 2);
      const double w = self_conjugate ? 1.0 : 2.0;
      num[bin] += w * (sa[i] * std::conj(sb[i])).real();
      den_a[bin] += w * std::norm(sa[i]);
      den_b[bin] += w * std::norm(sb[i]);
      counts[bin] += self_conjugate ? 1 : 2;
    }
    nd::advance_coords(coords, spec_shape);
  }

  FrcCurve curve;
  curve.frequency.resize(n_bins);
  curve.correlation.resize(n_bins);
  curve.counts = std::move(counts);
  for (std::size_t j = 0; j < n_bins; ++j) {
    curve.frequency[j] = j * bin_freq;
    const double den = std::sqrt(den_a[j] * den_b[j]);
    curve.correlation[j] = den > 0 ? num[j] / den : 0.0;
  }
  return curve;
}

double frc_resolution(const FrcCurve& curve, double spacing,
                      double threshold) {
  if (curve.correlation.empty()) return kUnresolved;
  // DC (j = 0) is reported but excluded from the search.
  for (std::size_t j = 1; j < curve.correlation.size(); ++j) {
    if (curve.correlation[j] < threshold) {
      double nu;
      if (j == 1 || curve.correlation[j - 1] < threshold) {
        nu = curve.frequency[j];
      } else {
        const double c0 = curve.correlation[j - 1];
        const double c1 = curve.correlation[j];
        const double f0 = curve.frequency[j - 1];
        const double f1 = curve.frequency[j];
        nu = f0 + (f1 - f0) * (c0 - threshold) / (c0 - c1);
      }
      if (nu <= 0) return kUnresolved;
      return spacing / nu;
    }
  }
  return kUnresolved;
}

double single_image_frc(const NdImage& img, double spacing, double threshold) {
  const NdImage src = img.as_f32();
  const Shape& shape = src.shape();
  for (std::size_t e : shape)
    if (e % 2 != 0)
      throw OddExtent("single_image_frc needs even extents on split axes");

  Shape half(shape.size());
  for (std::size_t a = 0; a < shape.size(); ++a) half[a] = shape[a] / 2;
  const auto v = src.f32_values();
  const auto strides = nd::row_major_strides(shape);
  const std::size_t hn = shape_volume(half);
  std::vector<float> even(hn), odd(hn);
  std::vector<long> c(half.size(), 0);
  for (std::size_t i = 0; i < hn; ++i) {
    std::size_t base = 0;
    for (std::size_t a = 0; a < half.size(); ++a)
      base += static_cast<std::size_t>(2 * c[a]) * strides[a];
    std::size_t shift = 0;
    for (std::size_t a = 0; a < half.size(); ++a) shift += strides[a];
    even[i] = v[base];
    odd[i] = v[base + shift];
    nd::advance_coords(c, half);
  }
  const FrcCurve curve = frc(NdImage::f32(half, std::move(even)),
                             NdImage::f32(half, std::move(odd)));
  return frc_resolution(curve, spacing * 2.0, threshold);
}

double average_precision(const LabelImage& pred, const LabelImage& truth,
                         double iou_threshold) {
  require_same_shape(pred, truth, "average_precision");
  if (pred.elem() != Elem::u32_label || truth.elem() != Elem::u32_label)
    throw ShapeMismatch("average_precision expects label images");
  const auto vp = pred.values<std::uint32_t>();
  const auto vt = truth.values<std::uint32_t>();

  std::unordered_map<std::uint32_t, std::size_t> size_p, size_t_;
  std::unordered_map<std::uint64_t, std::size_t> inter;
  for (std::size_t i = 0; i < vp.size(); ++i) {
    const std::uint32_t p = vp[i], t = vt[i];
    if (p) ++size_p[p];
    if (t) ++size_t_[t];
    if (p && t)
      ++inter[(static_cast<std::uint64_t>(p) << 32) | t];
  }
  const std::size_t n_pred = size_p.size(), n_truth = size_t_.size();
  if (n_pred == 0 && n_truth == 0) return 1.0;
  if (n_pred == 0 || n_truth == 0) return 0.0;

  struct Pair {
    double iou;
    std::uint32_t p, t;
  };
  std::vector<Pair> pairs;
  pairs.reserve(inter.size());
  for (const auto& [key, overlap] : inter) {
    const std::uint32_t p = static_cast<std::uint32_t>(key >> 32);
    const std::uint32_t t = static_cast<std::uint32_t>(key & 0xffffffffu);
    const double u =
        static_cast<double>(size_p[p] + size_t_[t] - overlap);
    const double iou = static_cast<double>(overlap) / u;
    if (iou >= iou_threshold) pairs.push_back({iou, p, t});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.p != b.p) return a.p < b.p;
    return a.t < b.t;
  });

  std::unordered_map<std::uint32_t, bool> used_p, used_t;
  std::size_t tp = 0;
  for (const Pair& pair : pairs) {
    if (used_p[pair.p] || used_t[pair.t]) continue;
    used_p[pair.p] = used_t[pair.t] = true;
    ++tp;
  }
  const std::size_t fp = n_pred - tp, fn = n_truth - tp;
  return static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
}

MaskedQuality masked_quality(const NdImage& intensity_a,
                             const NdImage& intensity_b,
                             const LabelImage& labels_a,
                             const LabelImage& labels_b) {
  require_same_shape(intensity_a, intensity_b, "masked_quality");
  require_same_shape(intensity_a, labels_a, "masked_quality");
  require_same_shape(intensity_a, labels_b, "masked_quality");

  auto masked = [](const NdImage& img, const LabelImage& labels) {
    const NdImage f = img.as_f32();
    const auto v = f.f32_values();
    const auto l = labels.values<std::uint32_t>();
    std::vector<float> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = l[i] ? v[i] : 0.0f;
    return NdImage::f32_like(f, std::move(out));
  };
  const NdImage ma = masked(intensity_a, labels_a);
  const NdImage mb = masked(intensity_b, labels_b);
  return {psnr(mb, ma), ssim(mb, ma)};
}

}  // namespace voxelkit::metrics
