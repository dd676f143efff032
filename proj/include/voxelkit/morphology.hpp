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

#include <cstddef>

#include "voxelkit/image.hpp"
#include "voxelkit/structuring.hpp"

namespace voxelkit::morph {

enum class MorphOp { erode, dilate, open, close };

// Binary Minkowski morphology on a bool mask. Out-of-bounds voxels count as
// background, so erosion shrinks at the borders.
NdImage binary_morphology(const NdImage& mask, const StructuringElement& se,
                          MorphOp op);

// Fills background components (face connectivity) that do not touch the
// volume border and have at most max_hole_size voxels.
inline constexpr std::size_t kUnlimitedHoleSize = static_cast<std::size_t>(-1);
NdImage fill_holes(const NdImage& mask, std::size_t max_hole_size);

// Zeroes labels with fewer than min_size voxels; survivors keep their ids.
LabelImage remove_small_objects(const LabelImage& labels, std::size_t min_size);

}  // namespace voxelkit::morph
