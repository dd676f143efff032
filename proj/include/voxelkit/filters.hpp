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

#include "voxelkit/image.hpp"
#include "voxelkit/structuring.hpp"

namespace voxelkit::filters {

// Separable Gaussian smoothing, one sigma per axis (mirror boundary).
// sigma 0 skips the axis. Kernel half-width is ceil(truncate * sigma) and
// the truncated kernel is renormalized to sum 1.
NdImage gaussian(const NdImage& img, std::vector<double> sigma,
                 double truncate = 4.0);
NdImage gaussian(const NdImage& img, double sigma, double truncate = 4.0);

// Rank filter: each voxel becomes the median of its in-bounds neighborhood
// under `se` (neighborhoods truncate at the volume border; even counts take
// the lower middle value).
NdImage median(const NdImage& img, const StructuringElement& se);

// FFT convolution. Linear mode zero-pads to img + kernel - 1 per axis
// (rounded up to a 5-smooth length) and crops the centered same-size result;
// circular mode requires kernel extents <= img extents.
NdImage fft_convolve(const NdImage& img, const NdImage& kernel,
                     bool circular = false);

}  // namespace voxelkit::filters
