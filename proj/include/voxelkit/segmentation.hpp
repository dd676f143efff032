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

#include <string>
#include <vector>

#include "voxelkit/image.hpp"
#include "voxelkit/structuring.hpp"

namespace voxelkit::seg {

enum class Connectivity { face, full };

// Exact Euclidean distance from each foreground voxel to the nearest
// background voxel (separable lower-envelope passes). Spacing-aware when the
// mask carries per-axis spacing; background maps to 0. A mask with no
// background yields +inf.
NdImage distance_transform(const NdImage& mask);

// Labels connected equal-valued plateaus that are maximal within the `se`
// neighborhood; labels are assigned in scan order.
LabelImage find_seeds(const NdImage& distance, const StructuringElement& se);

// Priority flood from the seeds over ascending landscape values. Ties pop in
// insertion order (seeds pushed by ascending label id, then scan order).
// Out-of-mask voxels stay 0; pass an empty mask to flood everywhere.
LabelImage watershed(const NdImage& landscape, const LabelImage& seeds,
                     const NdImage& mask = NdImage());

LabelImage connected_components(const NdImage& mask, Connectivity conn);

// Wall-clock seconds per named pipeline stage, in execution order.
struct StageTime {
  std::string stage;
  double seconds;
};
using StageTimes = std::vector<StageTime>;

// Nuclei from the DNA channel: normalize, downscale 0.5x, median (ball 5),
// Otsu, fill holes (<= 20), EDT-seeded watershed (ball 10), upscale,
// size filter (>= 50 voxels).
LabelImage segment_nuclei(const NdImage& dna, StageTimes* timings = nullptr);

// Cells from membrane + mitochondria + DNA constrained by nucleus seeds:
// multi-Otsu membrane mask (3 classes, unlimited hole fill), monolayer mask
// from combined channel masks closed with disk 17 at 0.25x, seeds from
// per-label erosion of the nuclei (ball 5), watershed on inverted normalized
// membrane, size filter (>= 100 voxels). Cell labels keep their nucleus ids.
LabelImage segment_cells(const NdImage& membrane, const NdImage& mitochondria,
                         const NdImage& dna, const LabelImage& nuclei,
                         StageTimes* timings = nullptr);

}  // namespace voxelkit::seg
