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

#include <vector>

#include "voxelkit/image.hpp"

namespace voxelkit::thresh {

// Otsu's threshold over `bins` equal-width bins spanning [min, max].
// Returns the left edge of the winning split bin; ties break toward the
// lower threshold. Throws DegenerateImage on constant input.
float otsu_threshold(const NdImage& img, int bins = 256);

// Multi-class Otsu: classes-1 strictly increasing thresholds maximizing the
// between-class variance by exhaustive search over split-point tuples.
std::vector<float> multi_otsu(const NdImage& img, int classes = 3,
                              int bins = 256);

// Boolean mask of img > threshold.
NdImage apply_threshold(const NdImage& img, float threshold);

}  // namespace voxelkit::thresh
