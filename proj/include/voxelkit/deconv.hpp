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

#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "voxelkit/image.hpp"

namespace voxelkit::deconv {

enum class StopMetric { si_psnr_vs_input, ssim_vs_prev, frc_resolution };

const char* to_string(StopMetric m);

// Stops when the metric's relative change between consecutive iterations
// stays below rel_tol for `patience` iterations in a row (diminishing
// returns), or at max_iters.
struct StoppingRule {
  StopMetric metric = StopMetric::frc_resolution;
  double rel_tol = 1e-3;
  int patience = 3;
  int max_iters = 100;
};

struct IterationRecord {
  int iter;  // 1-based, strictly increasing
  std::string metric_name;
  double value;
  double wall_time_s;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  // Poisson log-likelihood of (observed | estimate (*) psf) per iteration,
  // computed on the double-precision path.
  std::vector<double> log_likelihood;
  Shape fft_shape;            // padded FFT extents used for every step
  std::string stop_reason;    // "converged" or "max_iters"

  // CSV: iter,metric,value,wall_time_s
  void to_csv(std::ostream& out) const;
};

struct RlResult;
struct StoppingRule;

// PSF transforms precomputed once per run and reused by every step. One
// instance serves one run at a time.
class RlTransforms {
 public:
  RlTransforms(const Shape& image_shape, const NdImage& psf, int threads);
  ~RlTransforms();
  RlTransforms(const RlTransforms&) = delete;
  RlTransforms& operator=(const RlTransforms&) = delete;

  const Shape& image_shape() const;
  const Shape& fft_shape() const;

 private:
  friend NdImage rl_step(const NdImage&, const NdImage&, RlTransforms&);
  friend RlResult richardson_lucy(const NdImage&, const NdImage&,
                                  const StoppingRule&, bool);
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One multiplicative Richardson-Lucy update with linear (zero-padded)
// convolutions; equals the unfused fft_convolve / elementwise composition.
NdImage rl_step(const NdImage& estimate, const NdImage& observed,
                RlTransforms& transforms);
// Convenience form that builds the transforms on the fly.
NdImage rl_step(const NdImage& estimate, const NdImage& observed,
                const NdImage& psf);

struct RlResult {
  NdImage estimate;
  IterationTrace trace;
};

// Richardson-Lucy deconvolution with metric-guided stopping. The iteration
// domain is edge-replicate pre-padded by half the PSF extent to suppress
// wrap artifacts; the estimate is cropped back before metric evaluation and
// return. flat_init starts from the observed mean instead of the observed
// image.
RlResult richardson_lucy(const NdImage& observed, const NdImage& psf,
                         const StoppingRule& rule = {}, bool flat_init = false);

}  // namespace voxelkit::deconv
