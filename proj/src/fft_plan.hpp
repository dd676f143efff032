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

// Internal FFT layer: double-precision FFTW r2c/c2r with plan + buffer
// ownership. Planning goes through a global mutex (the FFTW planner is not
// thread-safe); execution on a built plan is.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "voxelkit/image.hpp"

namespace voxelkit::fftx {

// Smallest 5-smooth (2^a 3^b 5^c) length >= n.
std::size_t good_size(std::size_t n);

class RealFft {
 public:
  // threads > 1 uses FFTW's threaded execution for this plan.
  RealFft(Shape shape, int threads);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  const Shape& shape() const { return shape_; }
  std::size_t real_count() const { return real_count_; }
  // Hermitian half-spectrum: last axis truncated to nx/2 + 1.
  std::size_t complex_count() const { return complex_count_; }
  Shape spectrum_shape() const;

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Inverse transform, normalized by 1/volume.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  Shape shape_;
  std::size_t real_count_ = 0;
  std::size_t complex_count_ = 0;
  void* fwd_ = nullptr;   // fftw_plan
  void* inv_ = nullptr;   // fftw_plan
  double* rbuf_ = nullptr;
  void* cbuf_ = nullptr;  // fftw_complex*
};

}  // namespace voxelkit::fftx
