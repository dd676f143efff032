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

namespace voxelkit::transform {

// Spline rescaling. Output extent per axis is round(extent * factor), at
// least 1. Orders 0..5; orders >= 2 run the recursive B-spline prefilter so
// that resampling at the original grid reproduces the input. Sampling is
// center-aligned (x_in = (x_out + 0.5) / factor - 0.5) with mirror boundary.
// With anti_aliasing, axes that shrink are pre-smoothed with
// sigma = max(0, (1/factor - 1) / 2).
//
// Label and bool images resample with order 0 only and keep their element
// kind; other element kinds are promoted to f32 for order >= 1.
NdImage rescale(const NdImage& img, std::vector<double> factors, int order,
                bool anti_aliasing = false);
NdImage rescale(const NdImage& img, double factor, int order,
                bool anti_aliasing = false);

// The benchmark round trip: rescale by 2 (no anti-aliasing), then by 0.5
// with anti-aliasing. Output shape equals input shape.
NdImage upscale2x_downscale(const NdImage& img, int order);

}  // namespace voxelkit::transform
