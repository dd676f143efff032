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

#include "voxelkit/deconv.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>

#include "voxelkit/core_ops.hpp"
#include "voxelkit/metrics.hpp"
#include "voxelkit/parallel.hpp"
#include "voxelkit/registry.hpp"
#include "fft_plan.hpp"
#include "nd_utils.hpp"
#include "register_ops.hpp"

namespace voxelkit::deconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::size_t kernel_center(std::size_t extent) { return (extent - 1) / 2; }

// Copies `src` (shape `from`) into the origin corner of `dst` (shape `to`,
// zero elsewhere).
void corner_embed(const std::vector<double>& src, const Shape& from,
                  std::vector<double>& dst, const Shape& to) {
  std::fill(dst.begin(), dst.end(), 0.0);
  const auto to_strides = nd::row_major_strides(to);
  std::vector<long> c(from.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::size_t d = 0;
    for (std::size_t a = 0; a < from.size(); ++a)
      d += static_cast<std::size_t>(c[a]) * to_strides[a];
    dst[d] = src[i];
    nd::advance_coords(c, from);
  }
}

// Crops the 'same'-aligned region (offset by the kernel center) back out.
void centered_crop(const std::vector<double>& src, const Shape& from,
                   std::vector<double>& dst, const Shape& to,
                   const Shape& kernel_shape) {
  const auto from_strides = nd::row_major_strides(from);
  std::vector<long> c(to.size(), 0);
  for (std::size_t i = 0; i < dst.size(); ++i) {
    std::size_t s = 0;
    for (std::size_t a = 0; a < to.size(); ++a)
      s += (static_cast<std::size_t>(c[a]) + kernel_center(kernel_shape[a])) *
           from_strides[a];
    dst[i] = src[s];
    nd::advance_coords(c, to);
  }
}

}  // namespace

const char* to_string(StopMetric m) {
  switch (m) {
    case StopMetric::si_psnr_vs_input: return "si_psnr_vs_input";
    case StopMetric::ssim_vs_prev: return "ssim_vs_prev";
    case StopMetric::frc_resolution: return "frc_resolution";
  }
  return "?";
}

void IterationTrace::to_csv(std::ostream& out) const {
  out << "iter,metric,value,wall_time_s\n";
  for (const auto& r : records) {
    out << r.iter << "," << r.metric_name << ",";
    if (std::isinf(r.value)) {
      out << (r.value > 0 ? "inf" : "-inf");
    } else {
      out << r.value;
    }
    out << "," << r.wall_time_s << "\n";
  }
}

struct RlTransforms::Impl {
  Shape image_shape;
  Shape psf_shape;
  Shape work_shape;
  int threads = 1;
  std::unique_ptr<fftx::RealFft> fft;
  std::vector<std::complex<double>> psf_fft;
  std::vector<std::complex<double>> psf_flipped_fft;
  // scratch
  std::vector<double> work;
  std::vector<std::complex<double>> spec;

  Impl(const Shape& shape, const NdImage& psf, int nthreads)
      : image_shape(shape), psf_shape(psf.shape()), threads(nthreads) {
    if (psf.rank() != shape.size())
      throw ShapeMismatch("psf rank must match the image rank");
    work_shape.resize(shape.size());
    for (std::size_t a = 0; a < shape.size(); ++a)
      work_shape[a] = fftx::good_size(shape[a] + psf_shape[a] - 1);
    fft = std::make_unique<fftx::RealFft>(work_shape, threads);

    const auto pv = psf.as_f32().f32_values();
    std::vector<double> kernel(pv.begin(), pv.end());
    work.resize(fft->real_count());
    spec.resize(fft->complex_count());
    psf_fft.resize(fft->complex_count());
    psf_flipped_fft.resize(fft->complex_count());

    corner_embed(kernel, psf_shape, work, work_shape);
    fft->forward(work, psf_fft);
    std::reverse(kernel.begin(), kernel.end());  // flip about every axis
    corner_embed(kernel, psf_shape, work, work_shape);
    fft->forward(work, psf_flipped_fft);
  }

  // Linear 'same' convolution of `img` (image_shape) with the chosen
  // precomputed kernel spectrum.
  void convolve(const std::vector<double>& img, std::vector<double>& out,
                bool flipped) {
    corner_embed(img, image_shape, work, work_shape);
    fft->forward(work, spec);
    const auto& k = flipped ? psf_flipped_fft : psf_fft;
    const bool parallel = threads > 1;
    par::maybe_parallel(spec.size(), parallel, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) spec[i] *= k[i];
    });
    fft->inverse(spec, work);
    out.resize(shape_volume(image_shape));
    centered_crop(work, work_shape, out, image_shape, psf_shape);
  }

  // One multiplicative update in place; model receives estimate (*) psf.
  void step(std::vector<double>& estimate, const std::vector<double>& observed,
            std::vector<double>& model, std::vector<double>& ratio) {
    convolve(estimate, model, false);
    const bool parallel = threads > 1;
    ratio.resize(model.size());
    par::maybe_parallel(model.size(), parallel, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i)
        ratio[i] = observed[i] / std::max(model[i], kDivEpsilon);
    });
    std::vector<double> correction;
    convolve(ratio, correction, true);
    par::maybe_parallel(estimate.size(), parallel,
                        [&](std::size_t lo, std::size_t hi) {
                          for (std::size_t i = lo; i < hi; ++i)
                            estimate[i] =
                                std::max(estimate[i] * correction[i], 0.0);
                        });
  }
};

RlTransforms::RlTransforms(const Shape& image_shape, const NdImage& psf,
                           int threads)
    : impl_(std::make_unique<Impl>(image_shape, psf, threads)) {}
RlTransforms::~RlTransforms() = default;

const Shape& RlTransforms::image_shape() const { return impl_->image_shape; }
const Shape& RlTransforms::fft_shape() const { return impl_->work_shape; }

NdImage rl_step(const NdImage& estimate, const NdImage& observed,
                RlTransforms& transforms) {
  require_same_shape(estimate, observed, "rl_step");
  if (estimate.shape() != transforms.image_shape())
    throw ShapeMismatch("rl_step: transforms were prepared for " +
                        shape_to_string(transforms.image_shape()));
  const auto ve = estimate.as_f32().f32_values();
  const auto vo = observed.as_f32().f32_values();
  std::vector<double> e(ve.begin(), ve.end());
  const std::vector<double> obs(vo.begin(), vo.end());
  std::vector<double> model, ratio;
  transforms.impl_->step(e, obs, model, ratio);
  std::vector<float> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i)
    out[i] = static_cast<float>(e[i]);
  return NdImage::f32_like(estimate, std::move(out));
}

NdImage rl_step(const NdImage& estimate, const NdImage& observed,
                const NdImage& psf) {
  return dispatch<NdImage(const NdImage&, const NdImage&, const NdImage&)>(
      "rl_step", estimate, observed, psf);
}

namespace {

// Edge-replicate padding by half the PSF extent per axis.
struct PaddedDomain {
  Shape shape;
  std::vector<std::size_t> offset;
};

PaddedDomain padded_domain(const Shape& img, const Shape& psf) {
  PaddedDomain d;
  d.shape.resize(img.size());
  d.offset.resize(img.size());
  for (std::size_t a = 0; a < img.size(); ++a) {
    d.offset[a] = psf[a] / 2;
    d.shape[a] = img[a] + 2 * d.offset[a];
  }
  return d;
}

std::vector<double> replicate_pad(std::span<const float> v, const Shape& from,
                                  const PaddedDomain& d) {
  const auto from_strides = nd::row_major_strides(from);
  std::vector<double> out(shape_volume(d.shape));
  std::vector<long> c(from.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t s = 0;
    for (std::size_t a = 0; a < from.size(); ++a) {
      long pos = c[a] - static_cast<long>(d.offset[a]);
      pos = std::clamp<long>(pos, 0, static_cast<long>(from[a]) - 1);
      s += static_cast<std::size_t>(pos) * from_strides[a];
    }
    out[i] = v[s];
    nd::advance_coords(c, d.shape);
  }
  return out;
}

std::vector<float> crop_interior(const std::vector<double>& v,
                                 const PaddedDomain& d, const Shape& to) {
  const auto strides = nd::row_major_strides(d.shape);
  std::vector<float> out(shape_volume(to));
  std::vector<long> c(to.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t s = 0;
    for (std::size_t a = 0; a < to.size(); ++a)
      s += (static_cast<std::size_t>(c[a]) + d.offset[a]) * strides[a];
    out[i] = static_cast<float>(v[s]);
    nd::advance_coords(c, to);
  }
  return out;
}

// Trims trailing odd voxels so the checkerboard split applies.
NdImage even_view(const NdImage& img) {
  Shape even = img.shape();
  bool changed = false;
  for (auto& e : even)
    if (e % 2 != 0) {
      e -= 1;
      changed = true;
    }
  if (!changed) return img;
  const auto v = img.f32_values();
  const auto strides = nd::row_major_strides(img.shape());
  std::vector<float> out(shape_volume(even));
  std::vector<long> c(even.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t s = 0;
    for (std::size_t a = 0; a < even.size(); ++a)
      s += static_cast<std::size_t>(c[a]) * strides[a];
    out[i] = v[s];
    nd::advance_coords(c, even);
  }
  return NdImage::f32(even, std::move(out));
}

double eval_metric(StopMetric metric, const NdImage& current,
                   const NdImage& previous, const NdImage& observed) {
  switch (metric) {
    case StopMetric::si_psnr_vs_input:
      return metrics::si_psnr(current, observed);
    case StopMetric::ssim_vs_prev:
      return metrics::ssim(current, previous);
    case StopMetric::frc_resolution: {
      double spacing = 1.0;
      if (observed.spacing()) spacing = observed.spacing()->back();
      return metrics::single_image_frc(even_view(current), spacing);
    }
  }
  return 0.0;
}

// Relative change between consecutive metric values; infinities compare
// equal to themselves.
double relative_change(double prev, double cur) {
  if (std::isinf(prev) && std::isinf(cur) && prev == cur) return 0.0;
  if (std::isinf(prev) || std::isinf(cur)) return kInf;
  return std::abs(cur - prev) / std::max(std::abs(prev), 1e-30);
}

}  // namespace

RlResult richardson_lucy(const NdImage& observed, const NdImage& psf,
                         const StoppingRule& rule, bool flat_init) {
  if (rule.rel_tol <= 0 && !std::isinf(rule.rel_tol))
    throw Error("rel_tol must be positive");
  if (rule.patience < 1) throw Error("patience must be >= 1");
  if (rule.max_iters < 1) throw Error("max_iters must be >= 1");

  const NdImage obs_img = observed.as_f32();
  const NdImage psf_img = psf.as_f32();
  if (obs_img.rank() != psf_img.rank())
    throw ShapeMismatch("psf rank must match the image rank");

  const auto ov = obs_img.f32_values();
  for (float v : ov)
    if (v < 0) throw NegativeInput("observed image must be nonnegative");
  const auto pv = psf_img.f32_values();
  double psf_sum = 0;
  for (float v : pv) {
    if (v < 0) throw NegativeInput("psf must be nonnegative");
    psf_sum += v;
  }
  if (std::abs(psf_sum - 1.0) > 1e-3)
    throw UnnormalizedPsf("psf sums to " + std::to_string(psf_sum));

  const bool accelerated = observed.backend() == BackendId::accelerated;
  const int threads = accelerated ? par::max_threads() : 1;

  const PaddedDomain domain = padded_domain(obs_img.shape(), psf_img.shape());
  RlTransforms transforms(domain.shape, psf_img, threads);
  auto& impl = *transforms.impl_;

  const std::vector<double> obs_padded = replicate_pad(ov, obs_img.shape(), domain);
  std::vector<double> estimate;
  if (flat_init) {
    double mean = 0;
    for (double v : obs_padded) mean += v;
    mean /= static_cast<double>(obs_padded.size());
    estimate.assign(obs_padded.size(), mean);
  } else {
    estimate = obs_padded;
  }

  IterationTrace trace;
  trace.fft_shape = impl.work_shape;

  // Interior indices for the Poisson log-likelihood.
  const auto pad_strides = nd::row_major_strides(domain.shape);

  NdImage previous = obs_img;
  std::vector<double> model, ratio;
  int fails = 0;
  double prev_value = 0;
  bool have_prev = false;
  trace.stop_reason = "max_iters";

  for (int iter = 1; iter <= rule.max_iters; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();

    impl.convolve(estimate, model, false);

    // Poisson log-likelihood of the observed interior given the model.
    {
      double ll = 0;
      std::vector<long> c(obs_img.rank(), 0);
      const Shape& inner = obs_img.shape();
      for (std::size_t i = 0; i < ov.size(); ++i) {
        std::size_t s = 0;
        for (std::size_t a = 0; a < inner.size(); ++a)
          s += (static_cast<std::size_t>(c[a]) + domain.offset[a]) *
               pad_strides[a];
        const double m = std::max(model[s], kDivEpsilon);
        ll += static_cast<double>(ov[i]) * std::log(m) - m;
        nd::advance_coords(c, inner);
      }
      trace.log_likelihood.push_back(ll);
    }

    // Multiplicative update, reusing the forward model.
    {
      const bool parallel = threads > 1;
      ratio.resize(model.size());
      par::maybe_parallel(model.size(), parallel,
                          [&](std::size_t lo, std::size_t hi) {
                            for (std::size_t i = lo; i < hi; ++i)
                              ratio[i] = obs_padded[i] /
                                         std::max(model[i], kDivEpsilon);
                          });
      std::vector<double> correction;
      impl.convolve(ratio, correction, true);
      par::maybe_parallel(estimate.size(), parallel,
                          [&](std::size_t lo, std::size_t hi) {
                            for (std::size_t i = lo; i < hi; ++i)
                              estimate[i] = std::max(
                                  estimate[i] * correction[i], 0.0);
                          });
    }

    NdImage current =
        NdImage::f32_like(obs_img, crop_interior(estimate, domain, obs_img.shape()));
    const double value = eval_metric(rule.metric, current, previous, obs_img);
    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - t0;
    trace.records.push_back(
        {iter, to_string(rule.metric), value, dt.count()});

    if (have_prev) {
      if (relative_change(prev_value, value) < rule.rel_tol) {
        ++fails;
      } else {
        fails = 0;
      }
      if (fails >= rule.patience) {
        trace.stop_reason = "converged";
        previous = current;
        break;
      }
    }
    prev_value = value;
    have_prev = true;
    previous = current;
  }

  RlResult result;
  result.estimate =
      NdImage::f32_like(obs_img, crop_interior(estimate, domain, obs_img.shape()));
  result.trace = std::move(trace);
  return result;
}

}  // namespace voxelkit::deconv

namespace voxelkit::detail {

void register_deconv_ops(ExecutionRegistry& reg) {
  using StepSig = NdImage(const NdImage&, const NdImage&, const NdImage&);
  auto make_step = [](int threads) {
    return [threads](const NdImage& estimate, const NdImage& observed,
                     const NdImage& psf) {
      deconv::RlTransforms transforms(estimate.shape(), psf.as_f32(), threads);
      return deconv::rl_step(estimate, observed, transforms);
    };
  };
  reg.add<StepSig>("rl_step", BackendId::reference, make_step(1));
  reg.add<StepSig>("rl_step", BackendId::accelerated,
                   make_step(par::max_threads()));
}

}  // namespace voxelkit::detail
