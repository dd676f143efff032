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

#include "fft_plan.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace voxelkit::fftx {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_threads_once() {
  static const bool ok = [] { return fftw_init_threads() != 0; }();
  (void)ok;
}

}  // namespace

std::size_t good_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t candidate = n;; ++candidate) {
    std::size_t m = candidate;
    for (std::size_t p : {2, 3, 5})
      while (m % p == 0) m /= p;
    if (m == 1) return candidate;
  }
}

RealFft::RealFft(Shape shape, int threads) : shape_(std::move(shape)) {
  real_count_ = shape_volume(shape_);
  complex_count_ = shape_volume(spectrum_shape());

  std::vector<int> dims(shape_.begin(), shape_.end());

  std::lock_guard<std::mutex> lock(planner_mutex());
  init_threads_once();
  fftw_plan_with_nthreads(std::max(threads, 1));
  rbuf_ = fftw_alloc_real(real_count_);
  cbuf_ = fftw_alloc_complex(complex_count_);
  fwd_ = fftw_plan_dft_r2c(static_cast<int>(dims.size()), dims.data(), rbuf_,
                           static_cast<fftw_complex*>(cbuf_), FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r(static_cast<int>(dims.size()), dims.data(),
                           static_cast<fftw_complex*>(cbuf_), rbuf_,
                           FFTW_ESTIMATE);
  if (!fwd_ || !inv_) throw Error("FFTW plan creation failed");
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
  fftw_free(rbuf_);
  fftw_free(cbuf_);
}

Shape RealFft::spectrum_shape() const {
  Shape spec = shape_;
  spec.back() = spec.back() / 2 + 1;
  return spec;
}

void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  std::memcpy(rbuf_, in.data(), real_count_ * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(out.data(), cbuf_, complex_count_ * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  std::memcpy(cbuf_, in.data(), complex_count_ * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(inv_));
  const double scale = 1.0 / static_cast<double>(real_count_);
  for (std::size_t i = 0; i < real_count_; ++i) out[i] = rbuf_[i] * scale;
}

}  // namespace voxelkit::fftx
